import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy import integrate, special

from spectral_scaling import hermite as hc
from spectral_scaling.errors import ConfigError, ZeroMeanError
from spectral_scaling.random_measure import power_gaussian, power_law
from spectral_scaling.scaling import (
    ScalingExponents,
    ScalingScenario,
    limit_covariance,
    rescaled_solution_covariance,
)
from spectral_scaling.semigroup import heat_symbol
from spectral_scaling.spectral_grid import FrequencyGrid, gaussian

from oracles import (
    KERNEL_C2_K06,
    KERNEL_C3_K08,
    LEMMA_T_EXP,
    NONGAUSSIAN_LIMIT_K06,
    TAUBERIAN_K05,
    TAUBERIAN_K06,
)


class TestExpansion:
    def test_square_minus_one(self):
        ex = hc.hermite_coefficients(lambda x: x * x - 1, 8)
        assert_allclose(ex.coefficients[2], 2.0, rtol=1e-12)
        others = np.delete(ex.coefficients, 2)
        assert np.all(np.abs(others) < 1e-9)
        assert ex.rank == 2
        assert_allclose(ex.parseval_sum(), 2.0, rtol=1e-12)
        assert ex.tail_weight(2) == 0.0

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_pure_hermite_has_rank_n(self, n):
        ex = hc.hermite_coefficients(hc.hermite_function(n), 8)
        assert ex.rank == n
        assert_allclose(ex.coefficients[n], math.factorial(n), rtol=1e-12)

    def test_parseval_smooth_nonpolynomial(self):
        G = lambda x: np.sin(x)  # noqa: E731
        ex = hc.hermite_coefficients(G, 40)
        # E sin^2 X = (1 - e^{-2}) / 2
        assert_allclose(ex.second_moment, (1 - math.exp(-2)) / 2, rtol=1e-12)
        assert_allclose(ex.parseval_sum(), ex.second_moment, rtol=1e-8)
        assert ex.rank == 1

    def test_rank_undefined_for_constant(self):
        ex = hc.hermite_coefficients(lambda x: np.ones_like(x), 6)
        with pytest.raises(ValueError):
            ex.rank
        with pytest.raises(ZeroMeanError):
            ex.require_zero_mean()

    def test_recurrence_matches_scipy(self):
        x = np.linspace(-3, 3, 11)
        H = hc.hermite_polynomials(x, 6)
        for n in range(7):
            assert_allclose(H[n], special.eval_hermitenorm(n, x), rtol=1e-13, atol=1e-12)


class TestProfiles:
    @pytest.mark.parametrize("make", [hc.cauchy_profile, hc.power_exponential_profile])
    @pytest.mark.parametrize("k", [0.3, 0.6])
    def test_profile_is_valid_and_transform_pair(self, make, k):
        p = make(k)
        p.check()
        # R and the density form a Fourier pair
        R_back = hc.density_to_covariance(p.density)
        x = np.array([0.0, 0.7, 3.0])
        assert_allclose(R_back(x), p(x), rtol=1e-7)
        xi = np.array([0.3, 1.5])
        assert_allclose(hc.covariance_to_density(p.R, xi), p.density(xi), rtol=1e-6)

    @pytest.mark.parametrize("make", [hc.cauchy_profile, hc.power_exponential_profile])
    def test_tail_normalisation(self, make):
        p = make(0.6)
        x = 1e6
        assert_allclose(p(np.array([x]))[0] * x ** 0.4, 1.0, rtol=1e-5)

    def test_tauberian_constants(self):
        assert_allclose(hc.tauberian_constant(0.5), TAUBERIAN_K05, rtol=1e-15)
        assert_allclose(hc.tauberian_constant(0.6), TAUBERIAN_K06, rtol=1e-15)
        with pytest.raises(ValueError):
            hc.tauberian_constant(1.0)

    def test_empirical_tauberian_ladder(self):
        ladder = hc.empirical_tauberian(hc.cauchy_profile(0.5), 0.5, (1e-2, 1e-3, 1e-4))
        err = np.abs(ladder - TAUBERIAN_K05)
        assert np.all(np.diff(err) < 0)
        assert err[-1] < 1e-2

    def test_density_at_zero_needs_integrable_power(self):
        p = hc.cauchy_profile(0.6)
        with pytest.raises(ConfigError):
            hc.covariance_to_density(p.R, 0.0, power=2)
        # R^3 decays like x^{-1.2} and is integrable
        assert np.isfinite(hc.covariance_to_density(p.R, 0.0, power=3)[0])


class TestConvolution:
    def test_box_gives_triangle(self):
        h = 0.01
        x = np.arange(-200, 201) * h
        box = (np.abs(x) <= 0.5 + 1e-12).astype(float)
        box[np.isclose(np.abs(x), 0.5)] = 0.5
        tri = hc.convolution_power(box, 2, spacing=h)
        # the discrete sum departs from the triangle by h/2 at its three corners only
        err = np.abs(tri - np.clip(1 - np.abs(x), 0, None))
        assert np.max(err) <= 0.5 * h + 1e-12
        assert np.sum(err > 1e-12) == 3

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_gaussian_variances_add(self, n):
        grid = FrequencyGrid.covering(20.0, 0.01)
        g = np.exp(-grid.nodes ** 2 / 2) / math.sqrt(2 * math.pi)
        out = hc.convolution_power(g, n, grid=grid)
        expected = np.exp(-grid.nodes ** 2 / (2 * n)) / math.sqrt(2 * math.pi * n)
        assert_allclose(out, expected, atol=1e-12)

    def test_overflow_is_reported(self):
        grid = FrequencyGrid.covering(3.0, 0.01)
        g = np.exp(-grid.nodes ** 2 / 2)
        with pytest.raises(hc.GridOverflowError):
            hc.convolution_power(g, 4, grid=grid)

    def test_singular_density_convolution_matches_quadrature(self):
        f = lambda y: abs(y) ** -0.6 * math.exp(-y * y)  # noqa: E731
        grid = FrequencyGrid.covering(8.0, 2e-3)
        out = hc.convolution_power(power_gaussian(0.6), 2, grid)
        for u in (0.05, 0.5, 2.0):
            i = int(np.argmin(np.abs(grid.nodes - u)))
            v = grid.nodes[i]
            pieces = [(-np.inf, 0.0), (0.0, v), (v, np.inf)]
            direct = sum(integrate.quad(lambda y: f(y) * f(v - y), a, b, limit=200)[0] for a, b in pieces)
            assert_allclose(out[i], direct, rtol=1e-4)

    def test_interval_mass_partial_cells(self):
        v = np.ones(11)
        assert_allclose(hc.interval_mass(v, 0.1, -0.25, 0.25), 0.5)


class TestLemma:
    def test_exponential(self):
        rep = hc.appendix_lemma_check(lambda x: np.exp(-x), window=60.0)
        assert_allclose(rep.T, LEMMA_T_EXP, rtol=1e-5)
        assert_allclose(rep.delta, math.pi / (3 * rep.T))
        assert rep.passed
        assert rep.failures() == []

    def test_cauchy_power_truncated(self):
        rep = hc.appendix_lemma_check(lambda x: (1 + x * x) ** -0.7, window=1000.0, dx=0.01)
        assert rep.passed

    def test_box_gives_equality(self):
        rep = hc.appendix_lemma_check(lambda x: (x <= 1.0).astype(float), n_max=4, window=5.0)
        assert rep.passed
        assert np.all(rep.equality)

    def test_rejects_increasing(self):
        with pytest.raises(ConfigError):
            hc.appendix_lemma_check(lambda x: 1 - np.exp(-x), window=5.0)


class TestLimit:
    def test_kernel_constants(self):
        assert_allclose(hc.power_kernel_constant(1, 0.6), 1.0)
        assert_allclose(hc.power_kernel_constant(2, 0.6), KERNEL_C2_K06, rtol=1e-10)
        assert_allclose(hc.power_kernel_constant(3, 0.8), KERNEL_C3_K08, rtol=1e-10)

    def test_pairwise_integral_beta_form(self):
        a, b = 0.3, 0.25
        B = special.beta
        expected = B(a, b) + B(a, 1 - a - b) + B(b, 1 - a - b)
        assert_allclose(hc.power_convolution_integral(a, b), expected, rtol=1e-10)
        with pytest.raises(ConfigError):
            hc.power_convolution_integral(0.6, 0.5)

    @pytest.mark.parametrize("m,k", [(2, 0.5), (3, 0.6), (0, 0.5)])
    def test_rank_range(self, m, k):
        with pytest.raises(ConfigError):
            hc.power_kernel_constant(m, k)

    def test_limit_matches_frozen_value(self):
        val = hc.nongaussian_limit_covariance(gaussian(), gaussian(), 1.0, 1.0, 2, 0.6, c_m=2.0)
        assert_allclose(val, NONGAUSSIAN_LIMIT_K06, rtol=1e-10)

    def test_rank_one_reduces_to_gaussian_limit(self):
        k = 0.6
        val = hc.nongaussian_limit_covariance(gaussian(), gaussian(0.3, 0.8), 1.0, 0.5, 1, k)
        ref = hc.tauberian_constant(k) * limit_covariance(power_law(k), heat_symbol(), 1.0, 0.5,
                                                          gaussian(), gaussian(0.3, 0.8))
        assert_allclose(val, ref, rtol=1e-12)

    @pytest.mark.parametrize("T", [10.0, 1e3])
    def test_identity_G_matches_spectral_route(self, T):
        k = 0.6
        p = hc.cauchy_profile(k)
        ex = hc.hermite_coefficients(lambda x: x, 4)
        spatial = hc.rescaled_nongaussian_covariance(p, ex, T, 1.0, 1.0, gaussian(), gaussian())
        sc = ScalingScenario("identity", p.density, heat_symbol(), power_law(k), heat_symbol(),
                             ScalingExponents(-0.5, -0.5, (1 - k) / 4))
        spectral = rescaled_solution_covariance(sc, T, 1.0, 1.0, gaussian(), gaussian())
        assert_allclose(spatial, spectral, rtol=1e-6)


class TestChaosTail:
    def test_pure_rank_chaos_has_no_tail(self):
        ex = hc.hermite_coefficients(lambda x: x * x - 1, 8)
        out = hc.chaos_tail_bound(hc.cauchy_profile(0.6).density, ex, 2, 0.6, (10.0, 1e2))
        assert_array_equal(out, 0.0)

    def test_tail_is_positive_and_finite(self):
        G = lambda x: x * x - 1 + 0.1 * hc.hermite_function(3)(x) / 6  # noqa: E731
        ex = hc.hermite_coefficients(G, 8)
        out = hc.chaos_tail_bound(hc.cauchy_profile(0.6).density, ex, 2, 0.6, (10.0, 1e2))
        assert np.all(out > 0) and np.all(np.isfinite(out))

    def test_rejects_k_below_range(self):
        ex = hc.hermite_coefficients(lambda x: x * x - 1, 4)
        with pytest.raises(ConfigError):
            hc.chaos_tail_bound(power_gaussian(0.3), ex, 2, 0.3, (10.0,))


class TestSampling:
    def test_sampler_covariance_matches_profile(self):
        p = hc.cauchy_profile(0.6)
        s = hc.PeriodicFieldSampler.build(p.density, 0.05, 1 << 14)
        lags = np.array([0, 20, 60])
        assert_allclose(s.covariance(lags), p(lags * 0.05), atol=1e-4)

    def test_sampler_needs_finite_measure(self):
        with pytest.raises(ConfigError):
            hc.PeriodicFieldSampler.build(power_law(0.5), 0.1, 64)

    def test_pair_samples_deterministic_across_workers(self):
        p = hc.cauchy_profile(0.6)
        a, _, _ = hc.hermite_pair_samples(p, [0.0, 1.0], [1, 2], seed=3, M=130, workers=1)
        b, _, _ = hc.hermite_pair_samples(p, [0.0, 1.0], [1, 2], seed=3, M=130, workers=3)
        assert_array_equal(a, b)

    def test_pair_covariance_second_chaos(self):
        p = hc.cauchy_profile(0.6)
        vals, cov, _ = hc.hermite_pair_samples(p, [1.0], [2], seed=1, M=2000)
        x = vals[:, 0, 0, 0]
        emp = x.mean()
        se = x.std(ddof=1) / math.sqrt(x.size)
        assert abs(emp - 2 * cov[0] ** 2) < 5 * se

    def test_mc_rejects_small_M_and_nonzero_mean(self):
        p = hc.cauchy_profile(0.6)
        with pytest.raises(ConfigError):
            hc.mc_nongaussian_rescaled(lambda x: x * x - 1, p, 1.0, 10.0, gaussian(), 0, 10)
        with pytest.raises(ZeroMeanError):
            hc.mc_nongaussian_rescaled(lambda x: x * x, p, 1.0, 10.0, gaussian(), 0, 20,
                                       min_replicates=10)

    def test_mc_matches_exact_finite_T(self):
        p = hc.cauchy_profile(0.6)
        G = lambda x: x * x - 1  # noqa: E731
        run = hc.mc_nongaussian_rescaled(G, p, 1.0, 10.0, gaussian(), seed=4, M=1000)
        exact = hc.rescaled_nongaussian_covariance(p, hc.hermite_coefficients(G, 4), 10.0, 1.0, 1.0,
                                                   gaussian(), gaussian())
        assert abs(run.estimate.zscore(exact)) < 5
