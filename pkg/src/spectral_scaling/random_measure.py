"""Discretised orthogonal random measures on a frequency grid."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .spectral_grid import FrequencyGrid, cell_quadrature


@dataclass(frozen=True)
class SpectralDensity:
    """Even density f of a spectral measure.

    ``origin_exponent`` k and ``origin_constant`` C describe the behaviour
    f(xi) ~ C |xi|^-k at the origin (k = 0 for densities bounded there).
    """

    func: Callable[[np.ndarray], np.ndarray]
    origin_exponent: float = 0.0
    origin_constant: float = 1.0
    integrable: bool = True
    label: str = ""

    def __post_init__(self):
        if not 0.0 <= self.origin_exponent < 1.0:
            raise ValueError(f"origin exponent must lie in [0, 1), got {self.origin_exponent}")
        if self.origin_exponent > 0 and not self.origin_constant > 0:
            raise ValueError("origin constant must be positive")

    def __call__(self, xi):
        with np.errstate(divide="ignore"):
            return self.func(np.asarray(xi, dtype=float))

    def masses(self, grid: FrequencyGrid) -> np.ndarray:
        return cell_quadrature(self.func, grid, self.origin_exponent, self.origin_constant)

    def is_even(self, probes=None, rtol: float = 1e-12) -> bool:
        probes = np.linspace(0.1, 10.0, 37) if probes is None else np.asarray(probes)
        return bool(np.allclose(self(probes), self(-probes), rtol=rtol, atol=0))


def white_noise() -> SpectralDensity:
    """Lebesgue spectral measure (f = 1)."""
    return SpectralDensity(lambda xi: np.ones_like(xi), 0.0, 1.0, integrable=False, label="white")


def power_law(k: float, constant: float = 1.0) -> SpectralDensity:
    """f(xi) = constant |xi|^-k; the self-similar, non-integrable density."""
    if k == 0:
        return SpectralDensity(lambda xi: constant * np.ones_like(xi), 0.0, constant,
                               integrable=False, label="white")
    return SpectralDensity(lambda xi: constant * np.abs(xi) ** (-k), k, constant,
                           integrable=False, label=f"power({k:g})")


def power_gaussian(k: float) -> SpectralDensity:
    """f(xi) = |xi|^-k exp(-xi^2), the initial density of the heat example."""
    if k == 0:
        return SpectralDensity(lambda xi: np.exp(-xi * xi), 0.0, 1.0, label="gauss")
    return SpectralDensity(lambda xi: np.abs(xi) ** (-k) * np.exp(-xi * xi), k, 1.0,
                           label=f"powgauss({k:g})")


@dataclass(frozen=True)
class DiscretizedRandomMeasure:
    """Cell increments Z_j of one or several replicates.

    ``increments`` has shape (size,) for a single replicate or (M, size) for
    a batch; ``replicates`` lists the replicate indices row by row.
    """

    grid: FrequencyGrid
    masses: np.ndarray
    increments: np.ndarray
    seed: int
    replicates: tuple

    @property
    def is_batch(self) -> bool:
        return self.increments.ndim == 2

    def rescaled(self, r: float) -> "DiscretizedRandomMeasure":
        """Realise nu_r Z on the grid scaled by 1/r: (nu_r Z)(C_j / r) = Z(C_j)."""
        if r <= 0:
            raise ValueError("r must be positive")
        return DiscretizedRandomMeasure(self.grid.scaled(1.0 / r), self.masses,
                                        self.increments, self.seed, self.replicates)

    def weighted(self, weights: np.ndarray) -> "DiscretizedRandomMeasure":
        """Multiply every increment by a node weight (e.g. a semigroup multiplier)."""
        return DiscretizedRandomMeasure(self.grid, self.masses, self.increments * weights,
                                        self.seed, self.replicates)


def replicate_generator(seed: int, replicate: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator addressed by (seed, replicate, stream)."""
    if seed < 0 or replicate < 0:
        raise ValueError("seed and replicate must be non-negative")
    ss = np.random.SeedSequence([int(seed), int(replicate), int(stream)])
    return np.random.Generator(np.random.Philox(ss))


def hermitian_normals(seed: int, replicate: int, n_cells: int, stream: int = 0):
    """Independent standard normals A_j, B_j for the cells j = 0..n_cells-1."""
    draws = replicate_generator(seed, replicate, stream).standard_normal((2, n_cells))
    return draws[0], draws[1]


def _increments_from_normals(masses, A, B, N):
    """Z_j for j = -N..N from normals indexed by j = 0..N."""
    pos = np.sqrt(masses[N + 1:] / 2.0) * (A[..., 1:] + 1j * B[..., 1:])
    centre = np.sqrt(masses[N]) * A[..., :1] + 0j
    neg = np.conj(pos[..., ::-1])
    return np.concatenate([neg, centre, pos], axis=-1)


def _validated_masses(masses: np.ndarray) -> np.ndarray:
    masses = np.asarray(masses, dtype=float)
    if not np.all(np.isfinite(masses)):
        raise ValueError("cell masses must be finite")
    if np.any(masses < 0):
        raise ValueError("cell masses must be nonnegative")
    return masses


def sample_measure(
    density: Union[SpectralDensity, np.ndarray],
    grid: FrequencyGrid,
    seed: int,
    replicate: int = 0,
) -> DiscretizedRandomMeasure:
    """One replicate of the Hermitian complex Gaussian increments.

    For j > 0, Z_j = sqrt(m_j / 2)(A_j + i B_j); Z_0 = sqrt(m_0) A_0 and
    Z_-j = conj(Z_j).  ``density`` may also be a precomputed mass vector.
    """
    masses = _masses_of(density, grid)
    N = grid.half_width
    A, B = hermitian_normals(seed, replicate, N + 1)
    inc = _increments_from_normals(masses, A, B, N)
    return DiscretizedRandomMeasure(grid, masses, inc, int(seed), (int(replicate),))


def sample_measures(
    density: Union[SpectralDensity, np.ndarray],
    grid: FrequencyGrid,
    seed: int,
    replicates: Union[int, Sequence[int]],
) -> DiscretizedRandomMeasure:
    """A batch of replicates; row i is bit-identical to ``sample_measure(..., replicates[i])``."""
    reps = tuple(range(replicates)) if isinstance(replicates, (int, np.integer)) else tuple(replicates)
    masses = _masses_of(density, grid)
    N = grid.half_width
    A = np.empty((len(reps), N + 1))
    B = np.empty((len(reps), N + 1))
    for i, rep in enumerate(reps):
        A[i], B[i] = hermitian_normals(seed, rep, N + 1)
    inc = _increments_from_normals(masses, A, B, N)
    return DiscretizedRandomMeasure(grid, masses, inc, int(seed), reps)


def _masses_of(density, grid):
    if isinstance(density, SpectralDensity):
        return _validated_masses(density.masses(grid))
    masses = _validated_masses(density)
    if masses.shape != (grid.size,):
        raise ValueError("mass vector does not match the grid")
    return masses


def _on_nodes(g, nodes):
    values = np.asarray(g(nodes)) if callable(g) else np.asarray(g)
    return np.broadcast_to(values, nodes.shape)


def integrate(measure: DiscretizedRandomMeasure, g) -> np.ndarray:
    """Sample(s) of int g dZ = sum_j g(xi_j) Z_j."""
    values = _on_nodes(g, measure.grid.nodes)
    return measure.increments @ values


def covariance_oracle(density, grid: FrequencyGrid, g, h) -> complex:
    """E (int g dZ) conj(int h dZ) = sum_j g(xi_j) conj(h(xi_j)) sigma(C_j)."""
    masses = _masses_of(density, grid)
    nodes = grid.nodes
    return complex(np.sum(_on_nodes(g, nodes) * np.conj(_on_nodes(h, nodes)) * masses))


def scale_measure_density(density: SpectralDensity, r: float, prefactor: float = 1.0) -> SpectralDensity:
    """Density of prefactor * nu_r Z for Z with density f: prefactor^2 r f(r xi)."""
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    r = float(r)
    c = float(prefactor) ** 2 * r
    f = density.func
    k = density.origin_exponent
    return SpectralDensity(
        lambda xi: c * f(r * np.asarray(xi)),
        k,
        c * r ** (-k) * density.origin_constant,
        density.integrable,
        label=f"scaled({density.label},{r:g})",
    )
