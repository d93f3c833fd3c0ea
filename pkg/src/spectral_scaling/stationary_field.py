"""Generalised and regular stationary fields built on a discretised measure."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .random_measure import (
    DiscretizedRandomMeasure,
    SpectralDensity,
    covariance_oracle,
    integrate,
    sample_measures,
)
from .spectral_grid import FrequencyGrid, TestFunction, spectral_integral


class NoSampleError(RuntimeError):
    """Raised when a field is evaluated before a measure sample is attached."""


class NotRegularError(ValueError):
    """Raised when a pointwise (regular) representation does not exist."""


def _fourier(phi):
    return phi.fourier if isinstance(phi, TestFunction) else phi


@dataclass(frozen=True)
class StationaryField:
    density: SpectralDensity
    grid: FrequencyGrid
    measure: Optional[DiscretizedRandomMeasure] = None

    def with_samples(self, seed: int, replicates) -> "StationaryField":
        return replace(self, measure=sample_measures(self.density, self.grid, seed, replicates))

    def with_measure(self, measure: DiscretizedRandomMeasure) -> "StationaryField":
        if measure.grid != self.grid:
            raise ValueError("measure lives on a different grid")
        return replace(self, measure=measure)

    def masses(self) -> np.ndarray:
        if self.measure is not None:
            return self.measure.masses
        return self.density.masses(self.grid)


def evaluate(field: StationaryField, phi, imag_tol: float = 1e-10) -> np.ndarray:
    """eta(phi) = sum_j F phi(xi_j) Z_j for every attached replicate."""
    if field.measure is None:
        raise NoSampleError("no measure sample attached to the field")
    values = integrate(field.measure, _fourier(phi))
    return _real_part(values, imag_tol)


def _real_part(values, imag_tol):
    values = np.asarray(values)
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    if np.any(np.abs(values.imag) > imag_tol * scale):
        raise ValueError("field value is not real; is the test function real?")
    return values.real


def evaluate_regular(field: StationaryField, x, imag_tol: float = 1e-10) -> np.ndarray:
    """eta(x) = sum_j exp(i x xi_j) Z_j, defined only for a finite spectral measure.

    Returns an array of shape (M, len(x)) for a batch, (len(x),) otherwise.
    """
    if not field.density.integrable:
        raise NotRegularError(
            "spectral measure is not finite; the field has no regular representation")
    if field.measure is None:
        raise NoSampleError("no measure sample attached to the field")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    phase = np.exp(1j * np.multiply.outer(field.grid.nodes, x))
    return _real_part(field.measure.increments @ phase, imag_tol)


def grid_covariance(field: StationaryField, x) -> np.ndarray:
    """Exact covariance sum_j cos(x xi_j) sigma(C_j) of the discretised regular field."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return np.cos(np.multiply.outer(x, field.grid.nodes)) @ field.masses()


def covariance_function(density: SpectralDensity, x, upper: float = np.inf) -> np.ndarray:
    """R(x) = int exp(i x xi) f(xi) dxi by singular-aware quadrature."""
    if not density.integrable:
        raise NotRegularError("spectral measure is not finite")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    k = density.origin_exponent
    out = [spectral_integral(lambda xi, xv=xv: np.cos(xv * xi) * density(xi), k, upper=upper).real
           for xv in x]
    return np.asarray(out)


def h_norm(density: SpectralDensity, grid: FrequencyGrid, phi) -> float:
    """Discretised H_sigma norm: sqrt(int |F phi|^2 dsigma + int phi^2 dx).

    The L^2 term is evaluated on the Fourier side by Parseval,
    int phi^2 dx = (1/2pi) int |F phi|^2 dxi, so phi may be any Fourier-side
    callable (e.g. the image of a test function under a semigroup).
    """
    F = _fourier(phi)
    nodes = grid.nodes
    spectral = np.abs(F(nodes)) ** 2
    first = float(np.sum(spectral * density.masses(grid)))
    second = float(np.sum(spectral)) * grid.spacing / (2.0 * np.pi)
    return float(np.sqrt(first + second))


def generalized_covariance(density: SpectralDensity, grid: FrequencyGrid, phi, psi) -> float:
    """E eta(phi) eta(psi) = sum_j F phi conj(F psi) sigma(C_j) (real part)."""
    return covariance_oracle(density, grid, _fourier(phi), _fourier(psi)).real
