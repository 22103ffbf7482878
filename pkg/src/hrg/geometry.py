"""Hyperbolic disc geometry in native polar coordinates.

Distances, connection thresholds, the radial sampling density, and area
measures for the threshold graph model on a disc of radius R. A point is
(r, phi) with r the true hyperbolic distance to the disc origin and phi an
angle in [0, 2*pi). Functions accept scalars or numpy arrays and broadcast
elementwise unless stated otherwise; all of them are pure and safe to call
from multiple threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

TWO_PI = 2.0 * math.pi

__all__ = [
    "TWO_PI",
    "ModelParams",
    "PolarPoint",
    "MonteCarloEstimate",
    "delta_phi",
    "angle_gaps",
    "hyperbolic_distance",
    "pair_distances",
    "edge_indicator",
    "edge_mask",
    "theta_exact",
    "theta_approx",
    "radial_pdf",
    "mu_ball_origin_exact",
    "mu_lens_approx",
    "mu_monte_carlo",
]


@dataclass(frozen=True)
class ModelParams:
    """Model constants: target node count ``n``, radial density exponent
    ``alpha``, and radius offset ``C``. The disc radius ``R = 2 ln n + C``
    is derived and kept consistent with the inputs.

    Degree power laws with exponent between 2 and 3 correspond to
    ``1/2 < alpha < 1``. Any positive alpha is accepted, but values outside
    that window are flagged via :attr:`in_supported_regime` rather than
    rejected.
    """

    n: int
    alpha: float
    C: float
    R: float = field(init=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"node count must be at least 1, got {self.n}")
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        object.__setattr__(self, "R", 2.0 * math.log(self.n) + self.C)

    @property
    def in_supported_regime(self) -> bool:
        return 0.5 < self.alpha < 1.0

    @property
    def degree_exponent(self) -> float:
        """Theoretical exponent of the degree-distribution tail."""
        if self.alpha >= 0.5:
            return 2.0 * self.alpha + 1.0
        return 2.0

    @property
    def mean_degree(self) -> float:
        """Theoretical asymptotic average degree; diverges at alpha = 1/2."""
        a = self.alpha
        if a <= 0.5:
            return math.inf
        return 2.0 * a * a * math.exp(-self.C / 2.0) / (math.pi * (a - 0.5) ** 2)

    @classmethod
    def from_radius(cls, radius: float, alpha: float, C: float = 0.0) -> "ModelParams":
        """Params whose disc radius is as close to ``radius`` as an integer
        node count allows. Useful for measure-level studies where only R
        and alpha matter."""
        n = max(1, round(math.exp((radius - C) / 2.0)))
        return cls(n=n, alpha=alpha, C=C)


@dataclass(frozen=True)
class PolarPoint:
    """A point (r, phi) of the disc; the angle is normalized to [0, 2*pi)."""

    r: float
    phi: float

    def __post_init__(self) -> None:
        if not self.r >= 0.0:
            raise ValueError(f"radius must be non-negative, got {self.r}")
        phi = float(self.phi) % TWO_PI
        if phi >= TWO_PI:  # modulo of a tiny negative can round up to 2*pi
            phi = 0.0
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "r", float(self.r))


def _ret(x: np.ndarray) -> float | np.ndarray:
    return float(x) if np.ndim(x) == 0 else x


def angle_gaps(phi_a, phi_b):
    """Small relative angle between directions, elementwise, in [0, pi]."""
    return _ret(np.arccos(np.cos(np.asarray(phi_a, dtype=float) - phi_b)))


def delta_phi(u: PolarPoint, v: PolarPoint) -> float:
    """Small relative angle between two points, in [0, pi]."""
    return float(np.arccos(np.cos(u.phi - v.phi)))


def _cosh_distance(r_a, phi_a, r_b, phi_b):
    """cosh of the pairwise distance, grouped as
    ``cosh(r_a - r_b) + (1 - cos dphi) * sinh(r_a) * sinh(r_b)``.

    The grouping is a sum of non-negative increments, which avoids the
    catastrophic cancellation the textbook ``cosh*cosh - sinh*sinh*cos``
    form suffers at small angles. ``abs`` keeps the expression bitwise
    symmetric under argument swap.
    """
    r_a = np.asarray(r_a, dtype=float)
    phi_a = np.asarray(phi_a, dtype=float)
    spread = 1.0 - np.cos(np.abs(phi_a - phi_b))
    # grouping the sinh product keeps the expression bitwise symmetric
    return np.cosh(np.abs(r_a - r_b)) + spread * (np.sinh(r_a) * np.sinh(r_b))


def pair_distances(r_a, phi_a, r_b, phi_b):
    """Hyperbolic distances for parallel coordinate arrays."""
    arg = np.maximum(_cosh_distance(r_a, phi_a, r_b, phi_b), 1.0)
    return _ret(np.arccosh(arg))


def hyperbolic_distance(u: PolarPoint, v: PolarPoint) -> float:
    """Hyperbolic distance between two points.

    The inverse-cosh argument is clamped to >= 1 to absorb rounding for
    near-coincident points.
    """
    return float(pair_distances(u.r, u.phi, v.r, v.phi))


def edge_mask(r_a, phi_a, r_b, phi_b, R):
    """Boolean connection test for coordinate arrays: distance <= R, with
    ties at exactly R counting as connected."""
    return _cosh_distance(r_a, phi_a, r_b, phi_b) <= np.cosh(R)


def edge_indicator(u: PolarPoint, v: PolarPoint, R: float) -> bool:
    """True iff u and v are adjacent in the threshold graph of radius R.

    Works on the cosh scale; inverting the cosh near the threshold is
    ill-conditioned, comparing on the cosh scale is not.
    """
    return bool(edge_mask(u.r, u.phi, v.r, v.phi, R))


def theta_exact(r, y, R):
    """Maximal relative angle at which nodes with radii r and y are still
    adjacent, in [0, pi].

    Returns 0 when no angle connects the radii and pi when every angle
    does; the arccos argument is clamped to [-1, 1] to absorb rounding at
    those extremes. Symmetric in r and y. Zero radii are rejected (the
    expression divides by sinh of each radius).
    """
    r = np.asarray(r, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(r == 0.0) or np.any(y == 0.0):
        raise ValueError("theta_exact is undefined at radius 0")
    arg = (np.cosh(y) * np.cosh(r) - np.cosh(R)) / (np.sinh(y) * np.sinh(r))
    return _ret(np.arccos(np.clip(arg, -1.0, 1.0)))


def theta_approx(r, y, R):
    """Leading-order connection angle ``2 * exp((R - r - y) / 2)``.

    Requires ``y >= R - r``; outside that range the expansion does not
    apply and a ValueError is raised.
    """
    r = np.asarray(r, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(y < R - r):
        raise ValueError("theta_approx requires y >= R - r")
    return _ret(2.0 * np.exp((R - r - y) / 2.0))


def radial_pdf(r, params: ModelParams):
    """Density of the radial coordinate, ``alpha sinh(alpha r) / (cosh(alpha R) - 1)``
    on [0, R] and zero outside."""
    a = params.alpha
    r = np.asarray(r, dtype=float)
    inside = (r >= 0.0) & (r <= params.R)
    val = a * np.sinh(a * np.where(inside, r, 0.0)) / (math.cosh(a * params.R) - 1.0)
    return _ret(np.where(inside, val, 0.0))


def mu_ball_origin_exact(r, params: ModelParams):
    """Exact measure of the ball of radius r around the origin."""
    a = params.alpha
    r = np.asarray(r, dtype=float)
    return _ret((np.cosh(a * r) - 1.0) / (math.cosh(a * params.R) - 1.0))


def mu_lens_approx(r, m, params: ModelParams):
    """Leading term of the measure of the lens reachable from a node at
    radius r and lying within the ball of radius R - m around the origin:
    ``2 alpha / (pi (alpha - 1/2)) * exp(-alpha m - (r - m) / 2)``.

    Undefined at alpha = 1/2 where the prefactor has a pole.
    """
    a = params.alpha
    if a == 0.5:
        raise ValueError("lens approximation has a pole at alpha = 1/2")
    r = np.asarray(r, dtype=float)
    m = np.asarray(m, dtype=float)
    lead = 2.0 * a / (math.pi * (a - 0.5))
    return _ret(lead * np.exp(-a * m - (r - m) / 2.0))


@dataclass(frozen=True)
class MonteCarloEstimate:
    value: float
    std_error: float
    hits: int
    samples: int


def mu_monte_carlo(
    region: Callable[[np.ndarray, np.ndarray], np.ndarray],
    params: ModelParams,
    samples: int,
    seed: int = 0,
    chunk: int = 4_000_000,
) -> MonteCarloEstimate:
    """Estimate the measure of ``region`` by sampling the model density.

    ``region`` receives parallel (radii, angles) arrays and returns a
    boolean mask; any predicate written with numpy operations works
    unchanged for single points and for batches. Returns the hit fraction
    with its binomial standard error.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    from .sampling import radial_icdf  # deferred: sampling imports this module

    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        phi = rng.uniform(0.0, TWO_PI, k)
        radii = radial_icdf(rng.random(k), params)
        hits += int(np.count_nonzero(region(radii, phi)))
        done += k
    p = hits / samples
    err = math.sqrt(p * (1.0 - p) / samples)
    return MonteCarloEstimate(value=p, std_error=err, hits=hits, samples=samples)
