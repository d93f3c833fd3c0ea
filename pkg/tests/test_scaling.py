import numpy as np
import pytest
from numpy.testing import assert_allclose

from spectral_scaling.errors import ConfigError
from spectral_scaling.random_measure import power_gaussian, power_law
from spectral_scaling.scaling import (
    ScalingExponents,
    ScalingScenario,
    check_limit_bound,
    heat_gaussian_scenario,
    identify_limit_symbol,
    limit_covariance,
    measure_scaling_distance,
    pseudodiff_scenario,
    rescaled_solution_covariance,
    scaling_sweep,
    semigroup_scaling_distance,
)
from spectral_scaling.semigroup import (
    bounded_symbol,
    fractional_symbol,
    heat_symbol,
    MultiplierSymbol,
)
from spectral_scaling.spectral_grid import gaussian, polynomial_gaussian

from oracles import HEAT_LIMIT_K05


def test_heat_limit_matches_closed_form():
    val = limit_covariance(power_law(0.5), heat_symbol(), 1.0, 1.0, gaussian(), gaussian())
    assert_allclose(val, HEAT_LIMIT_K05, rtol=1e-10)


def test_limit_rejects_generalised_origin():
    with pytest.raises(ConfigError):
        limit_covariance(power_law(0.5), heat_symbol(), 0.0, 0.0, gaussian(), gaussian())
    with pytest.raises(ValueError):
        limit_covariance(power_law(0.5), heat_symbol(), -1.0, 0.0, gaussian(), gaussian())


@pytest.mark.parametrize("k", [0.0, 0.3, 0.5, 0.8])
def test_heat_distances_decrease(k):
    sc = heat_gaussian_scenario(k)
    md = [measure_scaling_distance(sc.initial, sc.limit_density, sc.exponents, T)
          for T in sc.T_sweep]
    assert np.all(np.diff(md) < 0)
    # the heat semigroup commutes with the diffusive scaling
    for T in sc.T_sweep:
        assert semigroup_scaling_distance(heat_symbol(), heat_symbol(), gaussian(), 1.0,
                                          sc.exponents, sc.initial, T) < 1e-20


def test_measure_distance_closed_form_rate():
    # sqrt f_T - sqrt f_lim = |x|^{-k/2}(exp(-x^2/2T) - 1); leading term x^4 / (4T^2)
    sc = heat_gaussian_scenario(0.5)
    T = 1e4
    d = measure_scaling_distance(sc.initial, sc.limit_density, sc.exponents, T)
    lead = 2 * (1.0 / (4 * T * T)) / 4.5  # int_{-1}^1 |x|^{3.5} dx / 4T^2
    assert_allclose(d, lead, rtol=1e-3)


def test_measure_distance_rejects_unbounded_A():
    sc = heat_gaussian_scenario(0.5)
    with pytest.raises(ValueError):
        measure_scaling_distance(sc.initial, sc.limit_density, sc.exponents, 10.0, (-np.inf, 1))


def test_self_similar_initial_gives_T_invariant_covariance():
    sc = ScalingScenario("self-similar", power_law(0.5), heat_symbol(), power_law(0.5),
                         heat_symbol(), ScalingExponents(-0.5, -0.5, 0.125))
    vals = [rescaled_solution_covariance(sc, T, 1.0, 1.0, gaussian(), gaussian())
            for T in (10.0, 1e2, 1e3, 1e4)]
    assert_allclose(vals, vals[0], rtol=1e-13)


def test_rescaled_covariance_approaches_limit():
    sc = heat_gaussian_scenario(0.5)
    recs = scaling_sweep(sc, {"g": gaussian(), "p": polynomial_gaussian([0.0, 1.0], 0.3)})
    by_T = {}
    for r in recs:
        by_T.setdefault(r.T, []).append(r.relative_gap)
    gaps = [max(by_T[T]) for T in sc.T_sweep]
    assert np.all(np.diff(gaps) < 0)
    assert gaps[-1] < 1e-3


def test_identify_bounded_symbol():
    rep = identify_limit_symbol(bounded_symbol(), -0.5)
    assert rep.converged
    assert_allclose(rep.q_at_one, -1.0, rtol=1e-3)
    assert rep.fractional_order == 1.0


def test_identify_fractional_exponent():
    rep = identify_limit_symbol(fractional_symbol(2.0, 0.5), -1.0)
    assert rep.converged
    assert_allclose(rep.q_at_one, -2.0, rtol=1e-12)


def test_identify_reports_non_convergence():
    # with alpha = -1 the heat symbol gives T p(x / T) = -x^2 / T, which never settles on a power law
    rep = identify_limit_symbol(heat_symbol(), -1.0)
    assert not rep.converged
    assert rep.symbol is None


def test_pseudodiff_scenario_uses_identified_symbol():
    sc = pseudodiff_scenario(0.5)
    x = np.array([0.5, 1.0, 2.0])
    assert_allclose(sc.limit_symbol(x), -(x ** 2), rtol=1e-3)
    d = [semigroup_scaling_distance(sc.symbol, sc.limit_symbol, gaussian(), 1.0, sc.exponents,
                                    sc.initial, T) for T in sc.T_sweep]
    assert np.all(np.diff(d) < 0)


def test_scenario_validation():
    with pytest.raises(ConfigError):
        heat_gaussian_scenario(1.0)
    bad = MultiplierSymbol(lambda xi: xi * xi, "anti")
    with pytest.raises(ConfigError):
        ScalingScenario("x", power_law(0.5), heat_symbol(), power_law(0.5), bad,
                        ScalingExponents(-0.5, -0.5, 0.125))
    with pytest.raises(ConfigError):
        heat_gaussian_scenario(0.5, T_sweep=(10.0, 5.0))


def test_check_limit_bound():
    out = check_limit_bound(power_gaussian(0.5), 0.5, (10.0, 1e2, 1e3), bound=1.0)
    assert out["sup_ratio"] <= 1.0
    with pytest.raises(ConfigError):
        check_limit_bound(power_gaussian(0.5), 0.5, (10.0, 1e2), bound=0.5)
