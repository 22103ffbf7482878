"""Seeded point-set generation.

Two samplers share one per-point distribution: ``sample_fixed`` places
exactly n points, ``sample_poisson`` first draws the count from a Poisson
law with mean n. Reproducibility contract: identical (params, mode, seed)
yields identical arrays within this implementation. The generator is
numpy's PCG64, which is documented, seedable, and splittable; bit-exact
agreement across implementations is not promised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import TWO_PI, ModelParams, PolarPoint

MODE_FIXED = "fixed"
MODE_POISSON = "poisson"

__all__ = [
    "MODE_FIXED",
    "MODE_POISSON",
    "PointSet",
    "radial_icdf",
    "sample_fixed",
    "sample_poisson",
    "disjointness_check",
]


def radial_icdf(u, params: ModelParams):
    """Inverse radial CDF: maps uniform u in [0, 1] to a radius in [0, R].

    Exact inverse of :func:`hrg.geometry.mu_ball_origin_exact`.
    """
    a = params.alpha
    # cosh(alpha * R) must stay below double overflow; alpha * R < 700
    # holds for any feasible node count.
    assert a * params.R < 700.0, "alpha * R too large for double precision"
    u = np.asarray(u, dtype=float)
    out = np.arccosh(1.0 + u * (math.cosh(a * params.R) - 1.0)) / a
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class PointSet:
    """Sampled points with provenance.

    Radii and angles are parallel read-only arrays; ``point(i)`` and the
    ``points`` property materialize :class:`PolarPoint` views on demand.
    Instances are immutable and safe to share across threads.
    """

    params: ModelParams
    r: np.ndarray
    phi: np.ndarray
    mode: str
    seed: int
    count_method: str = "direct"

    def __post_init__(self) -> None:
        r = np.ascontiguousarray(np.asarray(self.r, dtype=float))
        phi = np.ascontiguousarray(np.asarray(self.phi, dtype=float))
        if r.ndim != 1 or r.shape != phi.shape:
            raise ValueError("radius and angle arrays must be 1-d and parallel")
        if self.mode not in (MODE_FIXED, MODE_POISSON):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == MODE_FIXED and r.size != self.params.n:
            raise ValueError(
                f"fixed mode requires exactly n={self.params.n} points, got {r.size}"
            )
        if r.size:
            if float(r.min()) < 0.0 or float(r.max()) > self.params.R:
                raise ValueError("radius outside [0, R]")
            if float(phi.min()) < 0.0 or float(phi.max()) >= TWO_PI:
                raise ValueError("angle outside [0, 2*pi)")
        r.setflags(write=False)
        phi.setflags(write=False)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "phi", phi)

    def __len__(self) -> int:
        return self.r.size

    def point(self, i: int) -> PolarPoint:
        return PolarPoint(float(self.r[i]), float(self.phi[i]))

    @property
    def points(self) -> list[PolarPoint]:
        return [self.point(i) for i in range(len(self))]


def _draw_points(params: ModelParams, count: int, rng: np.random.Generator):
    phi = rng.uniform(0.0, TWO_PI, count)
    phi[phi >= TWO_PI] -= TWO_PI  # guard against rounding at the high end
    radii = radial_icdf(rng.random(count), params)
    return radii, phi


def sample_fixed(params: ModelParams, seed: int) -> PointSet:
    """Place exactly n points: angles uniform, radii via the inverse CDF."""
    rng = np.random.default_rng(seed)
    radii, phi = _draw_points(params, params.n, rng)
    return PointSet(params, radii, phi, MODE_FIXED, int(seed))


def _poisson_count(rng: np.random.Generator, mean: float) -> tuple[int, str]:
    """Draw a Poisson count; inversion below mean 10, numpy's transformed
    rejection (PTRS) otherwise. Returns (count, method name)."""
    if mean < 10.0:
        u = rng.random()
        x = 0
        p = math.exp(-mean)
        acc = p
        while u > acc:
            x += 1
            p *= mean / x
            acc += p
        return x, "inversion"
    return int(rng.poisson(mean)), "ptrs"


def sample_poisson(params: ModelParams, seed: int) -> PointSet:
    """Poisson variant: the point count is Poisson with mean n, then each
    point is drawn exactly as in :func:`sample_fixed`."""
    rng = np.random.default_rng(seed)
    count, method = _poisson_count(rng, float(params.n))
    radii, phi = _draw_points(params, count, rng)
    return PointSet(params, radii, phi, MODE_POISSON, int(seed), count_method=method)


def disjointness_check(
    region_a: Callable[[np.ndarray, np.ndarray], np.ndarray],
    region_b: Callable[[np.ndarray, np.ndarray], np.ndarray],
    params: ModelParams,
    trials: int,
    seed: int = 0,
    mode: str = MODE_POISSON,
) -> float:
    """Empirical Pearson correlation between the per-trial point counts of
    two regions.

    For disjoint regions under the Poisson sampler the counts are
    independent, so the correlation should be near zero; the fixed-count
    sampler makes counts of complementary regions anti-correlated. Regions
    are vectorized predicates as in :func:`hrg.geometry.mu_monte_carlo`.
    The caller is responsible for actual disjointness.
    """
    if trials < 2:
        raise ValueError("need at least 2 trials for a correlation")
    sampler = sample_poisson if mode == MODE_POISSON else sample_fixed
    counts_a = np.empty(trials)
    counts_b = np.empty(trials)
    for t in range(trials):
        ps = sampler(params, seed + t)
        counts_a[t] = np.count_nonzero(region_a(ps.r, ps.phi))
        counts_b[t] = np.count_nonzero(region_b(ps.r, ps.phi))
    return float(np.corrcoef(counts_a, counts_b)[0, 1])
