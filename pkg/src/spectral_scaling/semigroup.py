"""Fourier-multiplier semigroups and semigroup solutions.

An operator L with F(L phi) = p F phi acts on test functions through its
adjoint, F(L* phi) = conj(p) F phi, so the solution u(t) = e^{tL} eta_0 is
evaluated as u(t)(phi) = eta_0(e^{tL*} phi) = int e^{t conj p} F phi dZ_0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .random_measure import SpectralDensity, integrate
from .spectral_grid import FrequencyGrid, TimeTestFunction
from .stationary_field import StationaryField, _fourier, _real_part, evaluate


@dataclass(frozen=True)
class MultiplierSymbol:
    p: Callable[[np.ndarray], np.ndarray]
    name: str = ""
    hermitian: bool = True

    def __call__(self, xi):
        return self.p(np.asarray(xi, dtype=float))

    def conj(self, xi):
        return np.conj(self(xi))

    def is_dissipative(self, xi, tol: float = 0.0) -> bool:
        return bool(np.all(np.real(self(xi)) <= tol))

    def is_hermitian_on(self, xi, rtol: float = 1e-14) -> bool:
        xi = np.asarray(xi, dtype=float)
        return bool(np.allclose(self(-xi), np.conj(self(xi)), rtol=rtol, atol=0))


def heat_symbol() -> MultiplierSymbol:
    return MultiplierSymbol(lambda xi: -xi * xi + 0.0, "heat")


def fractional_symbol(c: float = 1.0, s: float = 0.5) -> MultiplierSymbol:
    """Symbol -c |xi|^{2s} of -c(-Laplacian)^s."""
    return MultiplierSymbol(lambda xi: -c * np.abs(xi) ** (2.0 * s), f"frac({c:g},{s:g})")


def bounded_symbol() -> MultiplierSymbol:
    """p(xi) = -xi^2 / (1 + xi^2)."""
    return MultiplierSymbol(lambda xi: -xi * xi / (1.0 + xi * xi), "bounded")


def drift_diffusion_symbol(drift: float = 1.0) -> MultiplierSymbol:
    """Symbol of u'' + drift u' under the exp(+i x xi) convention: -xi^2 - i drift xi."""
    return MultiplierSymbol(lambda xi: -xi * xi - 1j * drift * xi, f"drift({drift:g})")


def zero_symbol() -> MultiplierSymbol:
    return MultiplierSymbol(lambda xi: np.zeros_like(xi), "zero")


def multiplier(symbol: MultiplierSymbol, t: float, xi) -> np.ndarray:
    """exp(t conj p(xi)), the Fourier-side factor of e^{tL*}."""
    if t < 0:
        raise ValueError(f"semigroup time must be non-negative, got {t}")
    return np.exp(t * symbol.conj(xi))


def apply_semigroup(symbol: MultiplierSymbol, t: float, g) -> Callable:
    """xi -> exp(t conj p(xi)) g(xi)."""
    if t < 0:
        raise ValueError(f"semigroup time must be non-negative, got {t}")
    g = _fourier(g)
    if t == 0:
        return g
    return lambda xi: multiplier(symbol, t, xi) * g(xi)


@dataclass(frozen=True)
class SolutionField:
    initial: StationaryField
    symbol: MultiplierSymbol

    @property
    def grid(self) -> FrequencyGrid:
        return self.initial.grid


def solution_sample(sol: SolutionField, t: float, phi, path: str = "test-function") -> np.ndarray:
    """u(t)(phi) on the attached sample(s).

    ``path="test-function"`` moves the multiplier onto F phi;
    ``path="measure"`` moves it onto the increments Z_j instead.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if path == "test-function":
        return evaluate(sol.initial, apply_semigroup(sol.symbol, t, phi))
    if path == "measure":
        if sol.initial.measure is None:
            return evaluate(sol.initial, phi)  # raises NoSampleError
        weighted = sol.initial.measure.weighted(multiplier(sol.symbol, t, sol.grid.nodes))
        return _real_part(integrate(weighted, _fourier(phi)), 1e-10)
    raise ValueError(f"unknown path {path!r}")


def solution_covariance(sol: SolutionField, t: float, s: float, phi, psi) -> float:
    """E u(t)(phi) u(s)(psi) on the grid."""
    nodes = sol.grid.nodes
    a = multiplier(sol.symbol, t, nodes) * _fourier(phi)(nodes)
    b = multiplier(sol.symbol, s, nodes) * _fourier(psi)(nodes)
    return float(np.sum(a * np.conj(b) * sol.initial.masses()).real)


def _check_compact(psi: TimeTestFunction):
    probe = psi.support * np.array([1.0, 1.25, 1.5, 2.0, 4.0])
    if np.any(psi.amplitude(probe) != 0) or np.any(psi.derivative(probe) != 0):
        raise ValueError("time test function is not compactly supported in [0, support)")


def residual_spectrum(symbol: MultiplierSymbol, psi: TimeTestFunction, xi, time_step: float) -> np.ndarray:
    """r(xi) = int e^{t conj p}(a' + conj(p) a) dt F phi + a(0) F phi, trapezoidal in t."""
    if not time_step > 0:
        raise ValueError("time step must be positive")
    _check_compact(psi)
    n = int(np.ceil(psi.support / time_step))
    t = np.arange(n + 1) * time_step
    w = np.full(n + 1, time_step)
    w[0] = w[-1] = 0.5 * time_step
    xi = np.asarray(xi, dtype=float)
    pc = symbol.conj(xi)
    a = psi.amplitude(t)
    da = psi.derivative(t)
    # (time, frequency) table; rows beyond the support vanish
    integrand = np.exp(np.multiply.outer(t, pc)) * (da[:, None] + a[:, None] * pc[None, :])
    r = w @ integrand + psi.amplitude(np.array([0.0]))[0]
    return r * psi.phi.fourier(xi)


def weak_residual(symbol: MultiplierSymbol, psi: TimeTestFunction, density: SpectralDensity,
                  grid: FrequencyGrid, time_step: float) -> float:
    """E( int u(t)(B psi(t)) dt + eta_0(psi(0)) )^2 for the semigroup solution, B = d/dt + L*.

    Zero for an exact solution; what remains is time-quadrature error.
    """
    r = residual_spectrum(symbol, psi, grid.nodes, time_step)
    return float(np.sum(np.abs(r) ** 2 * density.masses(grid)))


def residual_ladder(symbol, psi, density, grid, steps=(4e-3, 2e-3, 1e-3)):
    """Residual energies over a time-step ladder and the observed order of the RMS residual."""
    steps = np.asarray(steps, dtype=float)
    energies = np.array([weak_residual(symbol, psi, density, grid, dt) for dt in steps])
    rms = np.sqrt(energies)
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = np.log(rms[:-1] / rms[1:]) / np.log(steps[:-1] / steps[1:])
    return energies, orders


def heat_evolved(phi, t: float):
    """e^{t Laplacian} phi in closed form for a Gaussian test function."""
    from .spectral_grid import gaussian

    if t < 0:
        raise ValueError("t must be non-negative")
    if getattr(phi, "kind", None) != "gaussian":
        raise TypeError("closed-form heat evolution needs a Gaussian test function")
    center, width, amplitude = phi.params
    w2 = np.sqrt(width * width + 2.0 * t)
    return gaussian(center, w2, amplitude * width / w2)
