"""
Scaling limit of the heat equation with a long-memory Gaussian start
=====================================================================

The initial field has spectral density |xi|^-k exp(-xi^2). Under the
diffusive rescaling u^T(t, phi) = T^gamma u(T t)(nu_{T^-1/2} phi) the
solution covariance approaches the one of a self-similar limit whose
spectral density is |xi|^-k.
"""

import numpy as np

from spectral_scaling.random_measure import power_gaussian, sample_measures
from spectral_scaling.scaling import heat_gaussian_scenario, scaling_sweep
from spectral_scaling.spectral_grid import FrequencyGrid, gaussian, polynomial_gaussian
from spectral_scaling.stationary_field import StationaryField, evaluate

# a field is evaluated against test functions, never at points
field = StationaryField(power_gaussian(0.5), FrequencyGrid.covering(8.0, 0.02))
field = field.with_samples(seed=1, replicates=4000)
phi = gaussian(0.0, 1.0)
values = evaluate(field, phi)
print("empirical Var eta(phi):", values.var())

# the two hypotheses and the covariance gap along T
scenario = heat_gaussian_scenario(k=0.5)
bank = {"g": gaussian(), "p1": polynomial_gaussian([0.0, 1.0], 0.3, 0.8)}
print(f"{'T':>8} {'pair':>6} {'measure':>10} {'semigroup':>10} {'rescaled':>12} {'limit':>12}")
for r in scaling_sweep(scenario, bank):
    print(f"{r.T:8.0e} {r.phi_id + '/' + r.psi_id:>6} {r.measure_distance:10.2e} "
          f"{r.semigroup_distance:10.1e} {r.rescaled_cov:12.8f} {r.limit_cov:12.8f}")

# the sampled measures follow the same construction in every replicate
m = sample_measures(power_gaussian(0.5), FrequencyGrid(4, 0.5), seed=3, replicates=2)
print(np.round(m.increments, 3))
