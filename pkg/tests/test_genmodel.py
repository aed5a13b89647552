"""Synthetic generators with known ground truth."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specbeta import (
    BadDimensionsError,
    DegenerateModelError,
    GroundTruth,
    causal_dataset,
    generate_samples,
    overfit_dataset,
    sample_aprime_def1,
    sample_aprime_def2,
    sample_ground_truth,
    true_beta,
)

from conftest import cov_from_spectrum


class TestGroundTruth:
    def test_dimension_properties(self, rng):
        t = GroundTruth(
            m=rng.standard_normal((3, 5)),
            a=np.zeros(3),
            c=np.zeros(5),
            sigma_a=1.0,
            sigma_c=1.0,
        )
        assert t.d == 3 and t.ell == 5

    def test_rejects_wide_mixing(self, rng):
        with pytest.raises(BadDimensionsError):
            GroundTruth(
                m=rng.standard_normal((5, 3)),
                a=np.zeros(5),
                c=np.zeros(3),
                sigma_a=1.0,
                sigma_c=1.0,
            )

    def test_rejects_rank_deficient_mixing(self):
        m = np.array([[1.0, 2.0], [2.0, 4.0]])
        with pytest.raises(BadDimensionsError):
            GroundTruth(m=m, a=np.zeros(2), c=np.zeros(2), sigma_a=1.0, sigma_c=1.0)

    def test_rejects_negative_scale(self):
        with pytest.raises(ValueError):
            GroundTruth(m=np.eye(2), a=np.zeros(2), c=np.zeros(2), sigma_a=-1.0, sigma_c=0.0)


class TestSampleGroundTruth:
    def test_deterministic(self):
        t1 = sample_ground_truth(10, 10, 7)
        t2 = sample_ground_truth(10, 10, 7)
        np.testing.assert_array_equal(t1.m, t2.m)
        np.testing.assert_array_equal(t1.a, t2.a)
        np.testing.assert_array_equal(t1.c, t2.c)
        assert t1.sigma_a == t2.sigma_a and t1.sigma_c == t2.sigma_c

    def test_scale_mean_is_half(self):
        vals = [sample_ground_truth(10, 10, s).sigma_a for s in range(1000)]
        assert abs(np.mean(vals) - 0.5) < 0.03

    def test_bad_dimensions(self):
        with pytest.raises(BadDimensionsError):
            sample_ground_truth(5, 3, 0)


class TestGenerateSamples:
    def test_degenerate_truth_gives_zero_target(self):
        t = GroundTruth(m=np.eye(2), a=np.zeros(2), c=np.zeros(2), sigma_a=0.0, sigma_c=0.0)
        ds = generate_samples(t, 50, rng=0)
        np.testing.assert_array_equal(ds.data.y, np.zeros(50))
        assert math.isnan(ds.true_beta)

    def test_pure_causal_structural_equation(self):
        t = GroundTruth(
            m=np.eye(2), a=np.array([1.0, 0.0]), c=np.zeros(2), sigma_a=1.0, sigma_c=0.0
        )
        ds = generate_samples(t, 100, rng=3)
        np.testing.assert_array_equal(ds.data.y, ds.data.x[:, 0])
        assert ds.true_beta == 0.0

    def test_covariance_concentrates_on_mixing(self):
        # d = ell = 10, n = 10000, fixed seed: empirical covariance lands
        # within Frobenius distance 2 of M M^T (relative error under 10%)
        t = sample_ground_truth(10, 10, 11)
        ds = generate_samples(t, 10000, rng=11)
        xc = ds.data.x - ds.data.x.mean(axis=0)
        emp = xc.T @ xc / ds.data.n
        target = t.m @ t.m.T
        dist = np.linalg.norm(emp - target)
        assert dist < 2.0
        assert dist < 0.1 * np.linalg.norm(target)

    def test_deterministic(self):
        t = sample_ground_truth(4, 6, 5)
        d1 = generate_samples(t, 30, rng=9)
        d2 = generate_samples(t, 30, rng=9)
        np.testing.assert_array_equal(d1.data.x, d2.data.x)
        np.testing.assert_array_equal(d1.data.y, d2.data.y)
        assert d1.seed == 9

    def test_rejects_tiny_n(self):
        t = sample_ground_truth(2, 2, 0)
        with pytest.raises(ValueError):
            generate_samples(t, 1)

    def test_rejects_negative_noise(self):
        t = sample_ground_truth(2, 2, 0)
        with pytest.raises(ValueError):
            generate_samples(t, 10, noise_sd=-0.5)


class TestTrueBeta:
    def test_purely_confounded(self, rng):
        t = GroundTruth(
            m=rng.standard_normal((3, 3)) + 3 * np.eye(3),
            a=np.zeros(3),
            c=np.array([1.0, 2.0, 3.0]),
            sigma_a=0.0,
            sigma_c=1.0,
        )
        assert true_beta(t) == 1.0

    def test_purely_causal(self, rng):
        t = GroundTruth(
            m=rng.standard_normal((3, 3)) + 3 * np.eye(3),
            a=np.array([1.0, 2.0, 3.0]),
            c=np.zeros(3),
            sigma_a=1.0,
            sigma_c=0.0,
        )
        assert true_beta(t) == 0.0

    def test_balanced_identity_mixing(self):
        t = GroundTruth(
            m=np.eye(2), a=np.array([1.0, 0.0]), c=np.array([0.0, 1.0]),
            sigma_a=1.0, sigma_c=1.0,
        )
        assert true_beta(t) == pytest.approx(0.5)

    def test_degenerate(self):
        t = GroundTruth(m=np.eye(2), a=np.zeros(2), c=np.zeros(2), sigma_a=0.0, sigma_c=0.0)
        with pytest.raises(DegenerateModelError):
            true_beta(t)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_in_unit_interval_and_monotone_in_c(self, seed):
        g = np.random.default_rng(seed)
        t = sample_ground_truth(4, 6, g)
        b = true_beta(t)
        assert 0.0 <= b <= 1.0
        doubled = GroundTruth(
            m=t.m, a=t.a, c=2.0 * t.c, sigma_a=t.sigma_a, sigma_c=t.sigma_c
        )
        b2 = true_beta(doubled)
        if 0.0 < b < 1.0:
            assert b2 > b
        else:
            assert b2 == b


class TestSamplers:
    def test_def1_no_confounding_is_isotropic(self):
        t = GroundTruth(
            m=np.eye(3), a=np.zeros(3), c=np.zeros(3), sigma_a=2.0, sigma_c=0.0
        )
        g = np.random.default_rng(0)
        draws = np.array([sample_aprime_def1(t, g) for _ in range(5000)])
        np.testing.assert_allclose(draws.var(axis=0), 4.0, rtol=0.1)

    def test_def1_mixing_shrinks_coordinates(self):
        t = GroundTruth(
            m=np.diag([1.0, 10.0]), a=np.zeros(2), c=np.zeros(2),
            sigma_a=0.0, sigma_c=1.0,
        )
        g = np.random.default_rng(1)
        draws = np.array([sample_aprime_def1(t, g) for _ in range(10000)])
        assert abs(draws[:, 1].var() - 0.01) < 0.001

    def test_def2_identity_covariance(self):
        cov = cov_from_spectrum([1.0, 1.0, 1.0])
        g = np.random.default_rng(2)
        draws = np.array([sample_aprime_def2(cov, 1.0, 1.0, g) for _ in range(10000)])
        np.testing.assert_allclose(draws.var(axis=0), 2.0, rtol=0.05)

    def test_def2_diagonal_spectrum(self):
        cov = cov_from_spectrum([1.0, 4.0])
        g = np.random.default_rng(3)
        draws = np.array([sample_aprime_def2(cov, 1.0, 1.0, g) for _ in range(10000)])
        # the eigenbasis sorts descending: coordinate for lambda = 4 has
        # variance 1 + 1/4, the one for lambda = 1 has variance 2
        coords = draws @ cov.eigenvectors
        assert abs(coords[:, 0].var() - 1.25) < 0.0625
        assert abs(coords[:, 1].var() - 2.0) < 0.1


class TestOverfitDataset:
    def test_precondition(self):
        with pytest.raises(ValueError):
            overfit_dataset(10, 11)

    def test_target_uncorrelated_on_average(self):
        corrs = []
        for s in range(200):
            ds = overfit_dataset(3, 50, rng=s)
            for j in range(3):
                corrs.append(np.corrcoef(ds.data.x[:, j], ds.data.y)[0, 1])
        assert abs(np.mean(corrs)) < 0.02

    def test_no_structural_confounding(self):
        ds = overfit_dataset(4, 30, rng=7)
        assert ds.true_beta == 0.0
        np.testing.assert_array_equal(ds.truth.a, np.zeros(4))

    def test_deterministic(self):
        d1 = overfit_dataset(4, 30, rng=5)
        d2 = overfit_dataset(4, 30, rng=5)
        np.testing.assert_array_equal(d1.data.x, d2.data.x)
        np.testing.assert_array_equal(d1.data.y, d2.data.y)


class TestCausalDataset:
    def test_no_confounding_recorded(self):
        ds = causal_dataset(5, 100, rng=0)
        assert ds.true_beta == 0.0
        np.testing.assert_array_equal(ds.truth.c, np.zeros(5))

    def test_noiseless_target_is_linear(self):
        ds = causal_dataset(5, 100, noise_sd=0.0, rng=1)
        np.testing.assert_allclose(ds.data.y, ds.data.x @ ds.truth.a, rtol=1e-12)
