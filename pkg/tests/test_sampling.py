"""Tests for the point samplers: inverse CDF, fidelity, Poisson variant."""

import math

import numpy as np
import pytest
from scipy import stats

from hrg.geometry import TWO_PI, ModelParams, mu_ball_origin_exact
from hrg.sampling import (
    MODE_FIXED,
    MODE_POISSON,
    PointSet,
    disjointness_check,
    radial_icdf,
    sample_fixed,
    sample_poisson,
)


class TestRadialIcdf:
    def test_endpoints(self):
        params = ModelParams(100, 0.75, 0.0)
        assert radial_icdf(0.0, params) == 0.0
        assert radial_icdf(1.0, params) == pytest.approx(params.R, abs=1e-12)

    def test_round_trip_with_measure(self):
        params = ModelParams(1000, 0.75, 0.0)
        rng = np.random.default_rng(0)
        u = rng.random(1000)
        back = mu_ball_origin_exact(radial_icdf(u, params), params)
        assert float(np.abs(back - u).max()) <= 1e-9


class TestSampleFixed:
    def test_single_point(self):
        ps = sample_fixed(ModelParams(1, 0.75, 0.0), 3)
        assert len(ps) == 1
        assert 0.0 <= ps.r[0] <= ps.params.R
        assert 0.0 <= ps.phi[0] < TWO_PI

    def test_count_and_ranges(self):
        params = ModelParams(5000, 0.75, -0.5)
        ps = sample_fixed(params, 11)
        assert len(ps) == params.n
        assert ps.mode == MODE_FIXED
        assert float(ps.r.min()) >= 0.0 and float(ps.r.max()) <= params.R
        assert float(ps.phi.min()) >= 0.0 and float(ps.phi.max()) < TWO_PI

    def test_deterministic_per_seed(self):
        params = ModelParams(500, 0.75, 0.0)
        a = sample_fixed(params, 42)
        b = sample_fixed(params, 42)
        c = sample_fixed(params, 43)
        assert np.array_equal(a.r, b.r) and np.array_equal(a.phi, b.phi)
        assert not np.array_equal(a.r, c.r)

    def test_radial_ks_at_one_percent(self):
        params = ModelParams(1_000_000, 0.75, 0.0)
        ps = sample_fixed(params, 5)
        result = stats.kstest(
            ps.r, lambda x: np.asarray(mu_ball_origin_exact(x, params))
        )
        assert result.pvalue > 0.01

    def test_angle_chisquare_at_one_percent(self):
        ps = sample_fixed(ModelParams(1_000_000, 0.75, 0.0), 6)
        bins = np.minimum((ps.phi / TWO_PI * 100).astype(int), 99)
        result = stats.chisquare(np.bincount(bins, minlength=100))
        assert result.pvalue > 0.01


class TestSamplePoisson:
    def test_mode_and_method(self):
        ps = sample_poisson(ModelParams(100, 0.75, 0.0), 1)
        assert ps.mode == MODE_POISSON
        assert ps.count_method == "ptrs"
        small = sample_poisson(ModelParams(5, 0.75, 0.0), 1)
        assert small.count_method == "inversion"

    def test_deterministic_per_seed(self):
        params = ModelParams(100, 0.75, 0.0)
        a = sample_poisson(params, 9)
        b = sample_poisson(params, 9)
        assert len(a) == len(b)
        assert np.array_equal(a.r, b.r) and np.array_equal(a.phi, b.phi)

    def test_count_moments(self):
        params = ModelParams(100, 0.75, 0.0)
        counts = np.array([len(sample_poisson(params, s)) for s in range(10_000)])
        assert abs(counts.mean() - 100.0) <= 3.0
        assert abs(counts.var(ddof=1) / 100.0 - 1.0) <= 0.10

    def test_probability_of_exact_count(self):
        params = ModelParams(100, 0.75, 0.0)
        counts = np.array([len(sample_poisson(params, s)) for s in range(100_000)])
        emp = float(np.mean(counts == 100))
        stirling = 1.0 / math.sqrt(2.0 * math.pi * 100.0)
        assert stirling / 2.0 <= emp <= stirling * 2.0

    def test_same_marginal_as_fixed(self):
        params = ModelParams(100_000, 0.75, 0.0)
        fixed = sample_fixed(params, 21)
        poisson = sample_poisson(params, 22)
        result = stats.ks_2samp(fixed.r, poisson.r)
        assert result.pvalue > 0.01


class TestDisjointness:
    def test_disjoint_halves_independent_under_poisson(self):
        params = ModelParams(100, 0.75, 0.0)
        corr = disjointness_check(
            lambda r, phi: phi < math.pi,
            lambda r, phi: phi >= math.pi,
            params,
            trials=10_000,
            seed=0,
        )
        assert abs(corr) < 0.05

    def test_identical_region_fully_correlated(self):
        params = ModelParams(100, 0.75, 0.0)
        region = lambda r, phi: phi < math.pi  # noqa: E731
        corr = disjointness_check(region, region, params, trials=200, seed=1)
        assert corr == pytest.approx(1.0)

    def test_fixed_sampler_anticorrelated_on_complement(self):
        params = ModelParams(100, 0.75, 0.0)
        corr = disjointness_check(
            lambda r, phi: phi < math.pi,
            lambda r, phi: phi >= math.pi,
            params,
            trials=2000,
            seed=2,
            mode=MODE_FIXED,
        )
        assert corr < -0.5


class TestPointSetValidation:
    def test_fixed_count_mismatch_rejected(self):
        params = ModelParams(3, 0.75, 0.0)
        with pytest.raises(ValueError):
            PointSet(params, np.array([1.0]), np.array([0.0]), MODE_FIXED, 0)

    def test_out_of_range_rejected(self):
        params = ModelParams(1, 0.75, 0.0)
        with pytest.raises(ValueError):
            PointSet(params, np.array([params.R + 1.0]), np.array([0.0]), MODE_FIXED, 0)
        with pytest.raises(ValueError):
            PointSet(params, np.array([0.5]), np.array([TWO_PI]), MODE_FIXED, 0)

    def test_arrays_are_read_only(self):
        ps = sample_fixed(ModelParams(10, 0.75, 0.0), 0)
        with pytest.raises(ValueError):
            ps.r[0] = 1.0

    def test_point_accessors(self):
        ps = sample_fixed(ModelParams(4, 0.75, 0.0), 0)
        pts = ps.points
        assert len(pts) == 4
        assert pts[2].r == ps.r[2] and pts[2].phi == ps.phi[2]
