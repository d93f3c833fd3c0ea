"""
Non-Gaussian start: Hermite rank and the finite-T bias
=======================================================

G(x) = x^2 - 1 applied to a unit-variance field with covariance
(1 + x^2)^{(k-1)/2} has Hermite rank 2. After heat evolution and rescaling
the covariance tends to a second-chaos limit, but slowly: the relative bias
decays like T^{-(2(1-k) - 1) / 2}, which is T^-0.1 at k = 0.6.
"""

from spectral_scaling import hermite as hc
from spectral_scaling.spectral_grid import gaussian

k = 0.6
G = lambda x: x * x - 1  # noqa: E731
expansion = hc.hermite_coefficients(G, 8)
print("Hermite coefficients:", expansion.coefficients.round(12), "rank", expansion.rank)

profile = hc.cauchy_profile(k)
phi = gaussian()
limit = hc.nongaussian_limit_covariance(phi, phi, 1.0, 1.0, 2, k, c_m=2.0)
print(f"limit covariance {limit:.6f}")
for T in (10.0, 1e2, 1e3, 1e4, 1e8, 1e12):
    exact = hc.rescaled_nongaussian_covariance(profile, expansion, T, 1.0, 1.0, phi, phi)
    print(f"T = {T:8.0e}  exact {exact:10.6f}  relative bias {exact / limit - 1:+.3f}")

run = hc.mc_nongaussian_rescaled(G, profile, 1.0, 100.0, phi, seed=0, M=2000)
print(f"Monte Carlo at T = 100: {run.estimate.estimate:.4f} +- {run.estimate.stderr:.4f}")
