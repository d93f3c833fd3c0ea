import numpy as np
import pytest
from numpy.testing import assert_allclose

from spectral_scaling.random_measure import power_gaussian, white_noise
from spectral_scaling.spectral_grid import FrequencyGrid, gaussian, polynomial_gaussian
from spectral_scaling.stationary_field import (
    NoSampleError,
    NotRegularError,
    StationaryField,
    covariance_function,
    evaluate,
    evaluate_regular,
    generalized_covariance,
    grid_covariance,
    h_norm,
)


@pytest.fixture
def field():
    return StationaryField(power_gaussian(0.0), FrequencyGrid.covering(8.0, 0.02))


def test_requires_sample(field):
    with pytest.raises(NoSampleError):
        evaluate(field, gaussian())


def test_values_are_real_and_linear(field):
    f = field.with_samples(seed=2, replicates=5)
    a, b = gaussian(0.0, 1.0), polynomial_gaussian([0.0, 1.0], 0.5, 0.7)
    lhs = evaluate(f, a + 3.0 * b)
    assert_allclose(lhs, evaluate(f, a) + 3.0 * evaluate(f, b), rtol=1e-12, atol=1e-12)


def test_regular_field_requires_finite_measure():
    f = StationaryField(white_noise(), FrequencyGrid(10, 0.1)).with_samples(0, 1)
    with pytest.raises(NotRegularError):
        evaluate_regular(f, [0.0])
    with pytest.raises(NotRegularError):
        covariance_function(white_noise(), [0.0])


def test_gaussian_density_covariance(field):
    # f = exp(-xi^2)  ->  R(x) = sqrt(pi) exp(-x^2/4)
    x = np.array([0.0, 0.5, 2.0])
    expected = np.sqrt(np.pi) * np.exp(-x * x / 4)
    assert_allclose(covariance_function(power_gaussian(0.0), x), expected, rtol=1e-10)
    assert_allclose(grid_covariance(field, x), expected, rtol=1e-10)


def test_regular_empirical_covariance(field):
    f = field.with_samples(seed=9, replicates=4000)
    x = np.array([0.0, 1.0])
    eta = evaluate_regular(f, x)
    emp = np.mean(eta[:, 0] * eta[:, 1])
    exact = grid_covariance(field, [1.0])[0]
    stderr = np.std(eta[:, 0] * eta[:, 1]) / np.sqrt(4000)
    assert abs(emp - exact) < 5 * stderr


def test_h_norm_dominates_l2(field):
    phi = gaussian(0.0, 1.0)
    n = h_norm(field.density, field.grid, phi)
    l2 = np.sqrt(np.sqrt(np.pi))  # int exp(-x^2) dx
    assert n > l2
    cov = generalized_covariance(field.density, field.grid, phi, phi)
    assert_allclose(n ** 2, cov + l2 ** 2, rtol=1e-10)


def test_with_measure_checks_grid(field):
    other = StationaryField(power_gaussian(0.0), FrequencyGrid(5, 0.1)).with_samples(0, 1)
    with pytest.raises(ValueError):
        field.with_measure(other.measure)
