"""Frequency grids, cell quadrature and Fourier transforms of test functions.

The Fourier transform used throughout the package is

    F phi(xi) = int exp(+i x xi) phi(x) dx

with no normalisation, so Parseval reads int |F phi|^2 dxi = 2 pi int phi^2 dx.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import hermite_e
from scipy import integrate

SQRT_2PI = np.sqrt(2.0 * np.pi)

# Gauss-Legendre nodes on [0, 1] for the regular remainder of a singular cell.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


@dataclass(frozen=True)
class FrequencyGrid:
    """Symmetric grid xi_j = j * spacing, j = -N..N, with cells of width spacing."""

    half_width: int
    spacing: float

    def __post_init__(self):
        if int(self.half_width) != self.half_width or self.half_width < 1:
            raise ValueError("half_width must be a positive integer")
        if not (np.isfinite(self.spacing) and self.spacing > 0):
            raise ValueError("spacing must be positive and finite")
        object.__setattr__(self, "half_width", int(self.half_width))
        object.__setattr__(self, "spacing", float(self.spacing))

    @classmethod
    def covering(cls, extent: float, spacing: float) -> "FrequencyGrid":
        """Smallest grid with the given spacing whose nodes reach +-extent."""
        return cls(max(1, int(np.ceil(extent / spacing))), spacing)

    @property
    def size(self) -> int:
        return 2 * self.half_width + 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)

    @property
    def nodes(self) -> np.ndarray:
        # integer multiples keep xi_{-j} == -xi_j bit for bit
        return self.indices * self.spacing

    @property
    def edges(self) -> np.ndarray:
        return (np.arange(-self.half_width, self.half_width + 2) - 0.5) * self.spacing

    @property
    def extent(self) -> float:
        return (self.half_width + 0.5) * self.spacing

    def scaled(self, factor: float) -> "FrequencyGrid":
        """Grid with every node multiplied by factor (cells map onto cells)."""
        if factor <= 0:
            raise ValueError("factor must be positive")
        return FrequencyGrid(self.half_width, self.spacing * factor)

    def refined(self, ratio: int = 2) -> "FrequencyGrid":
        return FrequencyGrid(self.half_width * ratio, self.spacing / ratio)


@dataclass(frozen=True)
class TestFunction:
    """A real test function known in space and on the Fourier side.

    ``kind`` is ``"gaussian"``, ``"polynomial-gaussian"``, ``"grid-sampled"``
    or ``"combination"``.  Gaussian functions keep their parameters in
    ``params`` (center, width, amplitude) so that scaling and heat evolution
    stay in closed form.
    """

    __test__ = False  # not a pytest class

    space: Callable[[np.ndarray], np.ndarray]
    fourier: Callable[[np.ndarray], np.ndarray]
    kind: str = "combination"
    params: tuple = ()
    label: str = ""

    def __call__(self, x):
        return self.space(np.asarray(x, dtype=float))

    def __add__(self, other: "TestFunction") -> "TestFunction":
        return TestFunction(
            space=lambda x: self.space(x) + other.space(x),
            fourier=lambda xi: self.fourier(xi) + other.fourier(xi),
            label=f"({self.label}+{other.label})",
        )

    def __sub__(self, other: "TestFunction") -> "TestFunction":
        return self + (-1.0) * other

    def __mul__(self, c: float) -> "TestFunction":
        c = float(c)
        if self.kind == "gaussian":
            center, width, amplitude = self.params
            return gaussian(center, width, amplitude * c)
        return TestFunction(
            space=lambda x: c * self.space(x),
            fourier=lambda xi: c * self.fourier(xi),
            label=f"{c:g}*{self.label}",
        )

    __rmul__ = __mul__

    def translate(self, h: float) -> "TestFunction":
        """tau_h phi(x) = phi(x - h); on the Fourier side a factor exp(i h xi)."""
        return TestFunction(
            space=lambda x: self.space(np.asarray(x) - h),
            fourier=lambda xi: np.exp(1j * h * np.asarray(xi)) * self.fourier(xi),
            kind=self.kind if self.kind != "gaussian" else "combination",
            label=f"tau({h:g}){self.label}",
        )


def gaussian(center: float = 0.0, width: float = 1.0, amplitude: float = 1.0) -> TestFunction:
    """phi(x) = amplitude * exp(-(x - center)^2 / (2 width^2))."""
    if width <= 0:
        raise ValueError("width must be positive")
    c, w, a = float(center), float(width), float(amplitude)

    def space(x):
        return a * np.exp(-((np.asarray(x) - c) ** 2) / (2.0 * w * w))

    def fourier(xi):
        xi = np.asarray(xi, dtype=float)
        return a * w * SQRT_2PI * np.exp(1j * c * xi - 0.5 * (w * xi) ** 2)

    return TestFunction(space, fourier, "gaussian", (c, w, a), f"G({c:g},{w:g},{a:g})")


def polynomial_gaussian(coefficients, center: float = 0.0, width: float = 1.0) -> TestFunction:
    """phi(x) = sum_n a_n u^n exp(-u^2/2) with u = (x - center)/width.

    Uses F[u^n e^{-u^2/2}] = w i^n sqrt(2 pi) He_n(w xi) e^{-(w xi)^2/2}
    (after the shift, times exp(i center xi)), written in the Hermite basis.
    """
    coeffs = np.asarray(coefficients, dtype=float)
    c, w = float(center), float(width)
    if w <= 0:
        raise ValueError("width must be positive")
    # monomial u^n -> Fourier factor i^n He_n(w xi); collect real/imag He-series
    he_series = np.zeros(len(coeffs), dtype=complex)
    he_series[:] = coeffs * (1j ** np.arange(len(coeffs)))

    def space(x):
        u = (np.asarray(x, dtype=float) - c) / w
        return np.polynomial.polynomial.polyval(u, coeffs) * np.exp(-0.5 * u * u)

    def fourier(xi):
        z = w * np.asarray(xi, dtype=float)
        series = hermite_e.hermeval(z, he_series.real) + 1j * hermite_e.hermeval(z, he_series.imag)
        return w * SQRT_2PI * np.exp(1j * c * np.asarray(xi) - 0.5 * z * z) * series

    return TestFunction(space, fourier, "polynomial-gaussian", (tuple(coeffs), c, w),
                        f"PG(deg={len(coeffs) - 1},{c:g},{w:g})")


def grid_sampled(x: np.ndarray, values: np.ndarray) -> TestFunction:
    """Test function given by samples on a uniform space grid.

    The transform is the discrete quadrature sum_m exp(i x_m xi) phi(x_m) dx.
    """
    x = np.asarray(x, dtype=float)
    values = np.asarray(values, dtype=float)
    if x.shape != values.shape or x.ndim != 1 or x.size < 2:
        raise ValueError("x and values must be matching 1-d arrays")
    dx = x[1] - x[0]
    if not np.allclose(np.diff(x), dx, rtol=1e-9, atol=0):
        raise ValueError("grid-sampled functions need a uniform grid")

    def space(y):
        return np.interp(y, x, values, left=0.0, right=0.0)

    def fourier(xi):
        xi = np.asarray(xi, dtype=float)
        phase = np.exp(1j * np.multiply.outer(xi, x))
        return (phase @ values) * dx

    return TestFunction(space, fourier, "grid-sampled", (x, values), f"S(n={x.size})")


def fourier_transform(phi: TestFunction, xi):
    """F phi(xi) under the exp(+i x xi) convention."""
    return phi.fourier(np.asarray(xi, dtype=float))


def scale_function(phi: TestFunction, r: float) -> TestFunction:
    """nu_r phi(x) = r phi(r x), so that F(nu_r phi)(xi) = F phi(xi / r)."""
    if not r > 0:
        raise ValueError(f"scaling factor must be positive, got {r}")
    r = float(r)
    if r == 1.0:
        return phi
    if phi.kind == "gaussian":
        center, width, amplitude = phi.params
        return gaussian(center / r, width / r, amplitude * r)
    if phi.kind == "grid-sampled":
        x, values = phi.params
        return grid_sampled(x / r, values * r)
    return TestFunction(
        space=lambda x: r * phi.space(r * np.asarray(x)),
        fourier=lambda xi: phi.fourier(np.asarray(xi) / r),
        kind=phi.kind,
        label=f"nu({r:g}){phi.label}",
    )


@dataclass(frozen=True)
class TimeTestFunction:
    """Separable space-time test function psi(t, x) = a(t) phi(x).

    ``amplitude`` and ``derivative`` must vanish for t >= ``support``.
    """

    __test__ = False

    amplitude: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    phi: TestFunction
    support: float
    label: str = field(default="")


def bump_in_time(phi: TestFunction, support: float = 1.0, height: float = 1.0) -> TimeTestFunction:
    """a(t) = height * exp(1 - 1/(1 - (t/support)^2)) on [0, support), zero after."""
    if support <= 0:
        raise ValueError("support must be positive")

    def amplitude(t):
        t = np.asarray(t, dtype=float)
        s = t / support
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        out[inside] = height * np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
        return out

    def derivative(t):
        t = np.asarray(t, dtype=float)
        s = t / support
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        si = s[inside]
        a = height * np.exp(1.0 - 1.0 / (1.0 - si**2))
        out[inside] = a * (-2.0 * si / (1.0 - si**2) ** 2) / support
        return out

    return TimeTestFunction(amplitude, derivative, phi, float(support), f"bump({support:g})")


def zero_in_time(phi: TestFunction, support: float = 1.0) -> TimeTestFunction:
    zero = lambda t: np.zeros_like(np.asarray(t, dtype=float))  # noqa: E731
    return TimeTestFunction(zero, zero, phi, float(support), "zero")


def _power_antiderivative(x, k):
    return np.sign(x) * np.abs(x) ** (1.0 - k) / (1.0 - k)


def cell_quadrature(
    f: Callable[[np.ndarray], np.ndarray],
    grid: FrequencyGrid,
    singular_exponent: float = 0.0,
    singular_constant: Optional[float] = None,
    singular_radius: float = 1.0,
) -> np.ndarray:
    """Masses int_{C_j} f for every cell of ``grid``.

    Cells are integrated by the midpoint rule.  When ``singular_exponent`` k is
    positive, f is split as C |xi|^-k + remainder on cells with
    |xi_j| <= singular_radius (always including the centre cell): the power
    part is integrated exactly and the remainder by the midpoint rule, or by
    Gauss-Legendre on the two halves of the centre cell.
    """
    k = float(singular_exponent)
    if not 0.0 <= k < 1.0:
        raise ValueError(f"singular exponent must lie in [0, 1), got {k}")
    nodes = grid.nodes
    h = grid.spacing
    N = grid.half_width
    if k == 0.0:
        values = np.asarray(f(nodes), dtype=float) * np.ones_like(nodes)
        _check_nonnegative(values)
        return values * h

    if singular_constant is None:
        raise ValueError("singular_constant is required when singular_exponent > 0")
    C = float(singular_constant)
    masses = np.empty_like(nodes)
    off = np.arange(grid.size) != N
    with np.errstate(divide="ignore"):
        values = np.asarray(f(np.where(off, nodes, 1.0)), dtype=float) * np.ones_like(nodes)
    _check_nonnegative(values[off])
    masses[off] = values[off] * h

    near = off & (np.abs(nodes) <= max(singular_radius, h))
    lo, hi = nodes[near] - 0.5 * h, nodes[near] + 0.5 * h
    exact = C * (_power_antiderivative(hi, k) - _power_antiderivative(lo, k))
    remainder = values[near] - C * np.abs(nodes[near]) ** (-k)
    masses[near] = exact + remainder * h

    # centre cell: exact singular part plus Gauss-Legendre remainder on each half
    half = 0.5 * h
    pos = _GL_X * half
    fv = np.asarray(f(pos), dtype=float) * np.ones_like(pos)
    fn = np.asarray(f(-pos), dtype=float) * np.ones_like(pos)
    _check_nonnegative(np.concatenate([fv, fn]))
    rem = (fv - C * pos ** (-k)) + (fn - C * pos ** (-k))
    masses[N] = 2.0 * C * half ** (1.0 - k) / (1.0 - k) + half * np.dot(_GL_W, rem)
    return masses


def _check_nonnegative(values):
    if np.any(np.isnan(values)):
        raise ValueError("density returned NaN on the grid")
    if np.any(values < 0):
        raise ValueError("density must be nonnegative on the grid")


def spectral_integral(
    g: Callable[[np.ndarray], np.ndarray],
    singular_exponent: float = 0.0,
    split: float = 1.0,
    upper: float = np.inf,
    epsrel: float = 1e-12,
    epsabs: float = 1e-15,
) -> complex:
    """Integral of g over (-upper, upper), allowing a |x|^-k singularity at 0.

    On [0, split] the substitution x = u^{1/(1-k)} removes the singularity;
    the outer parts go to ``scipy.integrate.quad`` directly.
    """
    k = float(singular_exponent)
    if not 0.0 <= k < 1.0:
        raise ValueError("singular exponent must lie in [0, 1)")
    split = min(split, upper)
    p = 1.0 / (1.0 - k)

    def inner(u, sign):
        x = sign * u**p
        return g(x) * p * u ** (p - 1.0)

    total = 0.0 + 0.0j
    for sign in (1.0, -1.0):
        total += _quad_complex(lambda u: inner(u, sign), 0.0, split ** (1.0 - k), epsrel, epsabs)
        if upper > split:
            total += _quad_complex(lambda x: g(sign * x), split, upper, epsrel, epsabs)
    return total


def _quad_complex(func, a, b, epsrel, epsabs):
    opts = dict(epsrel=epsrel, epsabs=epsabs, limit=400)
    re = integrate.quad(lambda x: np.real(func(x)), a, b, **opts)[0]
    probe = func(0.5 * (a + b) if np.isfinite(b) else a + 1.0)
    if np.iscomplexobj(probe):
        im = integrate.quad(lambda x: np.imag(func(x)), a, b, **opts)[0]
    else:
        im = 0.0
    return complex(re, im)


def interval_integral(g, a: float, b: float, singular_exponent: float = 0.0,
                      epsrel: float = 1e-12, epsabs: float = 1e-15) -> complex:
    """Integral of g over [a, b] with a possible |x|^-k singularity at 0."""
    if b < a:
        raise ValueError("empty interval")
    k = float(singular_exponent)
    p = 1.0 / (1.0 - k)
    if not (a < 0.0 < b) and a != 0.0 and b != 0.0:
        return _quad_complex(g, a, b, epsrel, epsabs)
    total = 0.0 + 0.0j
    for sign, end in ((1.0, b), (-1.0, -a)):
        if end > 0:
            total += _quad_complex(lambda u, s=sign: g(s * u**p) * p * u ** (p - 1.0),
                                   0.0, end ** (1.0 - k), epsrel, epsabs)
    return total
