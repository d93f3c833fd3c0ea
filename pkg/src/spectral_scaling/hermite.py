"""Non-Gaussian initial data G(eta_0): Hermite chaos, convolution powers and limits.

The Hermite basis is the probabilists' one (He_0 = 1, He_1 = x, He_2 = x^2 - 1)
and c_n = E[G(X) He_n(X)] for X standard normal, so that
E[G(X)^2] = sum_n c_n^2 / n!  and  E[G(eta(x)) G(eta(y))] = sum_n c_n^2/n! R(x-y)^n.

With R(x) = int e^{ix xi} f(xi) d xi, the density of R^n is
f^{*n}(xi) = (1/2pi) int e^{-ix xi} R(x)^n dx = (1/pi) int_0^inf cos(x xi) R(x)^n dx,
which is also the n-fold convolution of f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import hermite_e
from scipy import integrate as sint
from scipy import signal, special

from .errors import ConfigError, ConvergenceError, ZeroMeanError
from .montecarlo import MCEstimate, covariance_with_jackknife, map_replicates
from .random_measure import SpectralDensity, hermitian_normals
from .semigroup import heat_evolved
from .spectral_grid import FrequencyGrid, TestFunction, spectral_integral


class GridOverflowError(ValueError):
    """Raised when a convolution spills mass outside the working grid."""


# ---------------------------------------------------------------------------
# Hermite expansion


@dataclass(frozen=True)
class HermiteExpansion:
    G: Callable
    coefficients: np.ndarray
    second_moment: float
    quadrature_order: int

    @property
    def n_max(self) -> int:
        return len(self.coefficients) - 1

    def tolerance(self, n: int) -> float:
        return 1e-9 * math.sqrt(math.factorial(n) * max(self.second_moment, 0.0))

    def is_nonzero(self, n: int) -> bool:
        return abs(self.coefficients[n]) > self.tolerance(n)

    @property
    def rank(self) -> int:
        for n in range(1, self.n_max + 1):
            if self.is_nonzero(n):
                return n
        raise ValueError("Hermite rank undefined: all coefficients with n >= 1 vanish")

    def weights(self) -> np.ndarray:
        """c_n^2 / n!, the variance carried by each chaos."""
        fact = np.array([math.factorial(n) for n in range(self.n_max + 1)], dtype=float)
        return self.coefficients ** 2 / fact

    def parseval_sum(self) -> float:
        return math.fsum(self.weights().tolist())

    def tail_weight(self, m: int) -> float:
        """sum_{n > m} c_n^2 / n! over the computed coefficients above tolerance."""
        w = self.weights()
        return math.fsum(w[n] for n in range(m + 1, self.n_max + 1) if self.is_nonzero(n))

    def require_zero_mean(self) -> None:
        if abs(self.coefficients[0]) > 1e-9 * math.sqrt(max(self.second_moment, 0.0)):
            raise ZeroMeanError(f"E G(X) = {self.coefficients[0]:.3g} is not zero")


def hermite_polynomials(x, n_max: int) -> np.ndarray:
    """Rows He_0(x) .. He_{n_max}(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for n in range(1, n_max):
        out[n + 1] = x * out[n] - n * out[n - 1]
    return out


def _gauss_moments(G, n_max, order):
    x, w = hermite_e.hermegauss(order)
    w = w / math.sqrt(2.0 * math.pi)
    g = np.asarray(G(x), dtype=float)
    return hermite_polynomials(x, n_max) @ (w * g), float(np.sum(w * g * g))


def hermite_coefficients(G: Callable, n_max: int, order: Optional[int] = None,
                         max_order: int = 400, tol: float = 1e-10) -> HermiteExpansion:
    """c_n = E[G(X) He_n(X)] by Gauss-Hermite quadrature.

    The quadrature order starts at max(2 n_max + 2, 40) and is raised by half
    until successive normalised coefficients c_n / sqrt(n!) (and E G^2) agree
    to ``tol`` relative to max(1, sqrt(E G^2)).
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    order = order or max(2 * n_max + 2, 40)
    norm = np.array([math.sqrt(math.factorial(n)) for n in range(n_max + 1)])
    c, m2 = _gauss_moments(G, n_max, order)
    if not np.isfinite(m2):
        raise ValueError("E[G(X)^2] is not finite")
    while True:
        nxt = min(int(order * 1.5), max_order)
        if nxt == order:
            raise ConvergenceError(f"Hermite coefficients not stable at order {order}")
        c2, m22 = _gauss_moments(G, n_max, nxt)
        scale = max(1.0, math.sqrt(abs(m22)))
        if np.max(np.abs(c2 - c) / norm) <= tol * scale and abs(m22 - m2) <= tol * scale * scale:
            return HermiteExpansion(G, c2, m22, nxt)
        c, m2, order = c2, m22, nxt


def hermite_function(n: int) -> Callable:
    """x -> He_n(x)."""
    return lambda x: hermite_polynomials(x, n)[n]


# ---------------------------------------------------------------------------
# Covariance profiles


def tauberian_constant(k: float) -> float:
    """C_k with f ~ C_k |xi|^-k when R(x) |x|^{1-k} -> 1 under R = int e^{ix xi} f."""
    if not 0.0 < k < 1.0:
        raise ValueError("k must lie in (0, 1)")
    return math.gamma(k) * math.cos(math.pi * k / 2.0) / math.pi


@dataclass(frozen=True)
class CovarianceProfile:
    """Covariance R of a unit-variance stationary Gaussian field with tail |x|^{k-1}."""

    R: Callable[[np.ndarray], np.ndarray]
    k: float
    density: SpectralDensity
    label: str = ""

    def __call__(self, x):
        return self.R(np.abs(np.asarray(x, dtype=float)))

    @property
    def C_k(self) -> float:
        return tauberian_constant(self.k)

    def check(self, x=None, atol: float = 1e-12) -> None:
        """Unit variance, values in [0, 1] and monotone decay on a probe grid."""
        x = np.linspace(0.0, 200.0, 20001) if x is None else np.asarray(x, dtype=float)
        r = self(x)
        if abs(float(self(np.array([0.0]))[0]) - 1.0) > 1e-10:
            raise ValueError("R(0) must equal 1")
        if np.any(r < -atol) or np.any(r > 1 + atol):
            raise ValueError("R must take values in [0, 1]")
        if np.any(np.diff(r) > atol):
            raise ValueError("R must be non-increasing")


def power_exponential_profile(k: float) -> CovarianceProfile:
    """f(xi) = C_k |xi|^-k exp(-a|xi|) with a fixed by R(0) = 1.

    R(x) = (1 + (x/a)^2)^{-(1-k)/2} cos((1-k) arctan(x/a)), and R(x) x^{1-k} -> 1.
    """
    C = tauberian_constant(k)
    a = (2.0 * C * math.gamma(1.0 - k)) ** (1.0 / (1.0 - k))

    def R(x):
        x = np.asarray(x, dtype=float)
        return (1.0 + (x / a) ** 2) ** (-(1.0 - k) / 2.0) * np.cos((1.0 - k) * np.arctan(np.abs(x) / a))

    def f(xi):
        ax = np.abs(xi)
        return C * ax ** (-k) * np.exp(-a * ax)

    dens = SpectralDensity(f, k, C, integrable=True, label=f"powexp({k:g})")
    return CovarianceProfile(R, k, dens, label=f"powexp({k:g})")


def cauchy_profile(k: float) -> CovarianceProfile:
    """R(x) = (1 + x^2)^{(k-1)/2}; its density is a Bessel-K expression."""
    C = tauberian_constant(k)
    nu = k / 2.0
    norm = 1.0 / (math.sqrt(math.pi) * math.gamma((1.0 - k) / 2.0))

    def R(x):
        return (1.0 + np.asarray(x, dtype=float) ** 2) ** ((k - 1.0) / 2.0)

    def f(xi):
        ax = np.abs(xi)
        with np.errstate(over="ignore", invalid="ignore"):
            return norm * (ax / 2.0) ** (-nu) * special.kv(nu, ax)

    dens = SpectralDensity(f, k, C, integrable=True, label=f"cauchy({k:g})")
    return CovarianceProfile(R, k, dens, label=f"cauchy({k:g})")


def _tail_slope(R, x1: float = 1e3, x2: float = 1e4) -> float:
    r1, r2 = float(R(np.array([x1]))[0]), float(R(np.array([x2]))[0])
    if r2 <= 0 or r1 <= 0:
        return -np.inf
    return math.log(r2 / r1) / math.log(x2 / x1)


def covariance_to_density(R: Callable, xi, power: int = 1) -> np.ndarray:
    """f(xi) = (1/pi) int_0^inf cos(x xi) R(x)^power dx.

    Uses QUADPACK's Fourier-integral routine for xi != 0, which needs R^power
    only to decay, not to be integrable. At xi = 0 the integral must converge
    and a non-integrable tail raises ConfigError.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    g = (lambda x: R(np.asarray(x)) ** power) if power != 1 else R
    out = np.empty_like(xi)
    for i, v in enumerate(np.abs(xi)):
        if v == 0.0:
            if power * _tail_slope(R) >= -1.0 + 1e-3:
                raise ConfigError("R^n is not integrable; density at 0 is infinite")
            val, _ = sint.quad(lambda x: float(g(np.array([x]))[0]), 0.0, np.inf, limit=500)
        else:
            val, _ = sint.quad(lambda x: float(g(np.array([x]))[0]), 0.0, np.inf,
                               weight="cos", wvar=v, limlst=200, limit=500)
        out[i] = val / math.pi
    return out


def density_to_covariance(density: SpectralDensity) -> Callable:
    """x -> R(x) = 2 int_0^inf cos(x xi) f(xi) d xi (singular-aware)."""
    k = density.origin_exponent

    def R(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.array([spectral_integral(lambda xi, xv=xv: np.cos(xv * xi) * density(xi), k).real
                         for xv in x])

    return R


def empirical_tauberian(profile_or_R, k: float, ladder: Sequence[float] = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)):
    """f(xi) |xi|^k along a ladder of small xi, from the covariance R alone."""
    R = profile_or_R.R if isinstance(profile_or_R, CovarianceProfile) else profile_or_R
    ladder = np.asarray(ladder, dtype=float)
    return covariance_to_density(R, ladder) * ladder ** k


# ---------------------------------------------------------------------------
# Convolution powers


def convolution_power(f, n: int, grid: Optional[FrequencyGrid] = None, spacing: Optional[float] = None,
                      tol: float = 1e-9) -> np.ndarray:
    """Node values of f^{*n} on a symmetric uniform grid.

    ``f`` is either a SpectralDensity (cell masses / spacing are used, so
    singular densities are handled by exact centre cells) together with
    ``grid``, or an array of node values on a grid with the given ``spacing``.
    Each step is the discrete convolution times the spacing; mass that falls
    outside the grid beyond ``tol`` (relative) raises GridOverflowError.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if isinstance(f, SpectralDensity):
        if grid is None:
            raise ValueError("a grid is needed to discretise a density")
        spacing = grid.spacing
        base = f.masses(grid) / spacing
    else:
        base = np.asarray(f, dtype=float)
        if spacing is None:
            spacing = grid.spacing if grid is not None else None
        if spacing is None:
            raise ValueError("spacing is required for node values")
    if base.ndim != 1 or base.size % 2 != 1:
        raise ValueError("node values must sit on a symmetric grid of odd length")
    N = base.size // 2
    out = base.copy()
    for _ in range(n - 1):
        full = signal.fftconvolve(out, base) * spacing
        centre = full.size // 2
        kept = full[centre - N:centre + N + 1]
        total = abs(math.fsum(full.tolist()))
        spilled = total - abs(math.fsum(kept.tolist()))
        if total > 0 and spilled > tol * total:
            raise GridOverflowError(
                f"convolution support exceeds the grid (spilled fraction {spilled / total:.2e}); widen the grid")
        out = kept
    return out


def interval_mass(values: np.ndarray, spacing: float, a: float, b: float) -> float:
    """Mass of [a, b] for node values on cells of the given spacing (partial cells pro rata)."""
    N = values.size // 2
    edges_lo = (np.arange(-N, N + 1) - 0.5) * spacing
    overlap = np.clip(np.minimum(edges_lo + spacing, b) - np.maximum(edges_lo, a), 0.0, None)
    return float(np.sum(values * overlap))


# ---------------------------------------------------------------------------
# Convolution-power lemma


@dataclass(frozen=True)
class LemmaReport:
    T: float
    delta: float
    xi: np.ndarray
    differences: np.ndarray  # (n, xi): int cos(xi x) R^n (1 - R) dx
    tolerance: float
    window: float

    @property
    def passed(self) -> bool:
        return bool(np.all(self.differences >= -self.tolerance))

    @property
    def equality(self) -> np.ndarray:
        return np.abs(self.differences) <= self.tolerance

    @property
    def min_margin(self) -> float:
        return float(self.differences.min())

    def failures(self):
        n_idx, x_idx = np.nonzero(self.differences < -self.tolerance)
        return [(int(n) + 1, float(self.xi[j])) for n, j in zip(n_idx, x_idx)]


def appendix_lemma_check(R: Callable, n_max: int = 10, window: float = 200.0, dx: float = 1e-3,
                         n_xi: int = 24, tolerance: float = 1e-8) -> LemmaReport:
    """Constructive radius for monotone convolution powers near the origin.

    Finds the smallest T with (1/2) int_0^T R(1-R) >= int_T^W R(1-R) on the
    window [0, W], sets delta = pi / (3T) and checks, for xi in [0, delta)
    and n = 1..n_max,  int_0^W cos(xi x) R^n (1-R) dx >= -tolerance,
    i.e. int cos(xi x) R^{n+1} <= int cos(xi x) R^n.
    """
    x = np.arange(0.0, window + 0.5 * dx, dx)
    r = np.asarray(R(x), dtype=float)
    if np.any(r < -1e-12) or np.any(r > 1 + 1e-12) or np.any(np.diff(r) > 1e-12):
        raise ConfigError("R must be non-increasing with values in [0, 1]")
    h = r * (1.0 - r)
    cum = sint.cumulative_trapezoid(h, x, initial=0.0)
    total = cum[-1]
    # 1/2 I(T) >= I(W) - I(T)  <=>  3 I(T) - 2 I(W) >= 0
    crit = 3.0 * cum - 2.0 * total
    ok = np.nonzero((crit >= 0) & (x > 0))[0]
    if ok.size == 0:
        raise ConvergenceError(f"no valid T on the window [0, {window:g}]")
    i = ok[0]
    if i > 0 and crit[i - 1] < 0 and crit[i] > crit[i - 1]:
        T = x[i - 1] + dx * (-crit[i - 1]) / (crit[i] - crit[i - 1])
    else:
        T = x[i]
    T = max(T, dx)
    delta = math.pi / (3.0 * T)
    xi = np.linspace(0.0, delta, n_xi, endpoint=False)
    cosm = np.cos(np.multiply.outer(xi, x))
    diffs = np.empty((n_max, n_xi))
    rn = r.copy()
    for n in range(1, n_max + 1):
        diffs[n - 1] = sint.simpson(cosm * (rn * (1.0 - r)), x=x, axis=1)
        rn = rn * r
    return LemmaReport(float(T), float(delta), xi, diffs, tolerance, float(window))


# ---------------------------------------------------------------------------
# Chaos tail and limit covariance


def _check_rank_range(m: int, k: float, strict: bool = False):
    if m < 1:
        raise ConfigError("Hermite rank must be at least 1")
    lo = 1.0 - 1.0 / m
    if not (k < 1.0 and (k > lo if strict else k >= lo)):
        bound = f"({lo:g}, 1)" if strict else f"[{lo:g}, 1)"
        raise ConfigError(f"k = {k:g} outside {bound} for Hermite rank {m}")


def chaos_tail_bound(density: SpectralDensity, expansion: HermiteExpansion, m: int, k: float,
                     T_sweep: Sequence[float], A=(-1.0, 1.0), grid: Optional[FrequencyGrid] = None) -> np.ndarray:
    """Upper bound on E|sum_{n>m} (c_n/n!) T^gamma Z_n(T^{-1/2} A)|^2 along a T-sweep.

    bound(T) = T^{2 gamma} sigma_{m+1}(T^{-1/2} A) / (m+1)! * sum_{n>m} c_n^2/n!,
    gamma = m(1-k)/4, with sigma_{m+1} from the discrete convolution power.
    """
    _check_rank_range(m, k)
    a, b = A
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise ConfigError("A must be a bounded interval")
    tail = expansion.tail_weight(m)
    T_sweep = np.asarray(T_sweep, dtype=float)
    if tail == 0.0:
        return np.zeros_like(T_sweep)
    if grid is None:
        # resolve the smallest interval T^{-1/2} A with about 40 cells
        spacing = min(1e-3, (b - a) / (40.0 * math.sqrt(T_sweep.max())))
        grid = FrequencyGrid.covering(40.0, spacing)
    values = convolution_power(density, m + 1, grid)
    gamma = m * (1.0 - k) / 4.0
    out = []
    for T in T_sweep:
        s = T ** -0.5
        mass = interval_mass(values, grid.spacing, a * s, b * s)
        out.append(T ** (2 * gamma) * mass / math.factorial(m + 1) * tail)
    return np.asarray(out)


def power_convolution_integral(a: float, b: float) -> float:
    """int_R |y|^{a-1} |1-y|^{b-1} dy by weighted (algebraic-singularity) quadrature.

    Finite for a, b > 0 and a + b < 1.
    """
    if not (a > 0 and b > 0 and a + b < 1):
        raise ConfigError("power-law convolution diverges")
    one = lambda y: 1.0
    mid, _ = sint.quad(one, 0.0, 1.0, weight="alg", wvar=(a - 1.0, b - 1.0))

    def half_line(p, q):
        # int_0^inf y^{p-1} (1+y)^{q-1} dy split at 1; the upper half via y = 1/z
        lo, _ = sint.quad(lambda y: (1.0 + y) ** (q - 1.0), 0.0, 1.0, weight="alg", wvar=(p - 1.0, 0.0))
        hi, _ = sint.quad(lambda z: (1.0 + z) ** (q - 1.0), 0.0, 1.0, weight="alg", wvar=(-p - q, 0.0))
        return lo + hi

    return mid + half_line(a, b) + half_line(b, a)


def power_kernel_constant(m: int, k: float) -> float:
    """c with (|.|^-k)^{*m}(u) = c |u|^{m(1-k)-1}; c = 1 for m = 1."""
    _check_rank_range(m, k, strict=True)
    c = 1.0
    for j in range(2, m + 1):
        c *= power_convolution_integral((j - 1) * (1.0 - k), 1.0 - k)
    return c


def nongaussian_limit_covariance(phi, psi, t: float, s: float, m: int, k: float,
                                 C_k: Optional[float] = None, c_m: float = 1.0) -> float:
    """C_k^m (c_m^2/m!) int e^{-(t+s)u^2} F phi conj(F psi) g_m(u) du, g_m = (|.|^-k)^{*m}."""
    if t < 0 or s < 0:
        raise ValueError("times must be non-negative")
    _check_rank_range(m, k, strict=True)
    C_k = tauberian_constant(k) if C_k is None else C_k
    kernel = power_kernel_constant(m, k)
    e = 1.0 - m * (1.0 - k)  # g_m(u) = kernel |u|^{-e}
    Fp, Fq = _fourier_of(phi), _fourier_of(psi)
    if e == 0 and t + s == 0:
        raise ConfigError("limit covariance needs t + s > 0 for this kernel")

    def integrand(u):
        au = np.abs(u)
        with np.errstate(divide="ignore"):
            w = au ** (-e) if e != 0 else np.ones_like(au)
        return np.exp(-(t + s) * u * u) * Fp(u) * np.conj(Fq(u)) * w

    val = spectral_integral(integrand, e).real
    return float(C_k ** m * c_m ** 2 / math.factorial(m) * kernel * val)


def _fourier_of(phi):
    return phi.fourier if isinstance(phi, TestFunction) else phi


def gaussian_cross_correlation(chi1: TestFunction, chi2: TestFunction) -> Callable:
    """v -> int chi1(y) chi2(y - v) dy for two Gaussian test functions (closed form)."""
    (c1, w1, a1), (c2, w2, a2) = chi1.params, chi2.params
    s2 = w1 * w1 + w2 * w2
    pref = a1 * a2 * math.sqrt(2.0 * math.pi) * w1 * w2 / math.sqrt(s2)
    return lambda v: pref * np.exp(-(np.asarray(v) - (c1 - c2)) ** 2 / (2.0 * s2))


def rescaled_nongaussian_covariance(profile: CovarianceProfile, expansion: HermiteExpansion,
                                    T: float, t: float, s: float, phi: TestFunction, psi: TestFunction,
                                    m: Optional[int] = None) -> float:
    """Exact E u^T(t,phi) u^T(s,psi) for heat evolution of G(eta_0) at finite T.

    In space, E G(eta(x)) G(eta(y)) = sum_n (c_n^2/n!) R(x-y)^n, so with
    chi_t = e^{t Lap} phi the covariance is
    T^{2 gamma} sum_n (c_n^2/n!) int R(sqrt(T) v)^n K(v) dv,
    K(v) = int chi_t(y) chi_s(y - v) dy, gamma = m(1-k)/4.
    """
    m = expansion.rank if m is None else m
    gamma = m * (1.0 - profile.k) / 4.0
    chi1, chi2 = heat_evolved(phi, t), heat_evolved(psi, s)
    K = gaussian_cross_correlation(chi1, chi2)
    centre = chi1.params[0] - chi2.params[0]
    sd = math.hypot(chi1.params[1], chi2.params[1])
    lo, hi = centre - 14.0 * sd, centre + 14.0 * sd
    rt = math.sqrt(T)
    weights = expansion.weights()
    total = 0.0
    for n in range(1, expansion.n_max + 1):
        if not expansion.is_nonzero(n):
            continue
        g = lambda v, n=n: float(profile(rt * v) ** n * K(v))
        # R(sqrt(T) v) varies on the scale 1/sqrt(T); break the range there
        scales = [10.0 ** j / rt for j in range(-1, 5) if 10.0 ** j / rt < sd]
        pts = sorted({p for p in [0.0, centre] + scales + [-x for x in scales] if lo < p < hi})
        val, _ = sint.quad(g, lo, hi, points=pts, epsabs=0.0, epsrel=1e-11, limit=1000)
        total += weights[n] * val
    return float(T ** (2 * gamma) * total)


# ---------------------------------------------------------------------------
# Monte Carlo through a sampled regular field


@dataclass(frozen=True)
class PeriodicFieldSampler:
    """Regular Gaussian field on x_j = j dx (j mod n) by a real inverse FFT.

    eta(x_j) = sum_l exp(i x_j xi_l) Z_l over xi_l = l d xi, |l| < n/2, with
    d xi = 2 pi / (n dx); increments follow the Hermitian cell construction.
    """

    density: SpectralDensity
    dx: float
    n: int
    masses: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, density: SpectralDensity, dx: float, n: int) -> "PeriodicFieldSampler":
        if not density.integrable:
            raise ConfigError("spectral measure is not finite; the field has no regular representation")
        if n % 2:
            raise ValueError("n must be even")
        grid = FrequencyGrid(n // 2 - 1, 2.0 * math.pi / (n * dx))
        return cls(density, float(dx), int(n), density.masses(grid)[n // 2 - 1:])

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / (self.n * self.dx)

    def covariance(self, lags) -> np.ndarray:
        """Exact covariance of the discretised field at integer lags."""
        lags = np.asarray(lags)
        l = np.arange(self.masses.size)
        ph = np.cos(2.0 * math.pi * np.multiply.outer(lags, l) / self.n)
        w = self.masses.copy()
        w[1:] *= 2.0
        return ph @ w

    def sample(self, seed: int, replicate: int, stream: int = 0) -> np.ndarray:
        half = self.masses.size
        A, B = hermitian_normals(seed, replicate, half, stream)
        c = np.zeros(self.n // 2 + 1, dtype=complex)
        c[0] = math.sqrt(self.masses[0]) * A[0]
        c[1:half] = np.sqrt(self.masses[1:] / 2.0) * (A[1:] + 1j * B[1:])
        return np.fft.irfft(c, self.n) * self.n


def _fft_size(window: float, dx: float, dxi: float) -> int:
    need = max(4.0 * window / dx, 2.0 * math.pi / (dx * dxi))
    return 1 << int(math.ceil(math.log2(need)))


@dataclass(frozen=True)
class NonGaussianRun:
    estimate: MCEstimate
    T: float
    gamma: float
    fft_size: int
    dx: float
    samples: np.ndarray = field(repr=False)


def _window_weights(phi: TestFunction, t: float, T: float, x: np.ndarray) -> np.ndarray:
    chi = heat_evolved(phi, t)
    rt = math.sqrt(T)
    return chi(x / rt) / rt


def mc_nongaussian_rescaled(G: Callable, profile: CovarianceProfile, t: float, T: float, phi: TestFunction,
                            seed: int, M: int, s: Optional[float] = None, psi: Optional[TestFunction] = None,
                            m: Optional[int] = None, dx: float = 0.5, rel_dxi: float = 0.02,
                            workers: int = 1, chunk: int = 32, expansion: Optional[HermiteExpansion] = None,
                            min_replicates: int = 1000) -> NonGaussianRun:
    """Empirical E u^T(t,phi) u^T(s,psi) for u^T(t,phi) = T^gamma <G(eta_0), e^{Tt Lap} nu_{T^-1/2} phi>.

    The heat-evolved, rescaled test function is T^{-1/2} chi_t(x / sqrt T)
    with chi_t = e^{t Lap} phi in closed form, so the pairing is a Riemann sum
    of G(eta_0(x_j)) over a window of 8 standard deviations. eta_0 is drawn on
    a periodic grid by FFT; the spectral spacing is ``rel_dxi`` times the
    inverse window scale. The standard error is the jackknife one.
    """
    if M < min_replicates:
        raise ConfigError(f"need at least {min_replicates} replicates, got {M}")
    s = t if s is None else s
    psi = phi if psi is None else psi
    if not profile.density.integrable:
        raise ConfigError("spectral measure is not finite; no regular field")
    if expansion is None:
        expansion = hermite_coefficients(G, 12)
    m = expansion.rank if m is None else m
    expansion.require_zero_mean()
    gamma = m * (1.0 - profile.k) / 4.0
    rt = math.sqrt(T)

    chis = [heat_evolved(phi, t), heat_evolved(psi, s)]
    lo = min(c.params[0] - 8.0 * c.params[1] for c in chis) * rt
    hi = max(c.params[0] + 8.0 * c.params[1] for c in chis) * rt
    scale = min(c.params[1] for c in chis) * rt
    n = _fft_size(hi - lo, dx, rel_dxi / scale)
    sampler = PeriodicFieldSampler.build(profile.density, dx, n)
    j = np.arange(int(math.floor(lo / dx)), int(math.ceil(hi / dx)) + 1)
    x = j * dx
    idx = np.mod(j, n)
    wphi = _window_weights(phi, t, T, x) * dx * T ** gamma
    wpsi = _window_weights(psi, s, T, x) * dx * T ** gamma

    def run(reps):
        out = np.empty((len(reps), 2))
        for i, r in enumerate(reps):
            g = np.asarray(G(sampler.sample(seed, r)[idx]), dtype=float)
            out[i] = g @ wphi, g @ wpsi
        return out

    vals = map_replicates(run, M, chunk=chunk, workers=workers)
    est = covariance_with_jackknife(vals[:, 0], vals[:, 1])
    return NonGaussianRun(est, float(T), gamma, n, dx, vals)


def hermite_pair_samples(profile: CovarianceProfile, lags: Sequence[float], n_values: Sequence[int],
                         seed: int, M: int, dx: float = 0.05, n: int = 1 << 14, workers: int = 1,
                         chunk: int = 64):
    """He_n(eta_0(0)) He_l(eta_0(x)) samples for the requested lags.

    Returns (values, exact_covariance) where values[r, a, b, i] is
    He_{n_a}(eta(0)) He_{n_b}(eta(lag_i)) on replicate r and the exact
    covariance of the discretised field at each lag is reported alongside.
    """
    sampler = PeriodicFieldSampler.build(profile.density, dx, n)
    steps = np.rint(np.asarray(lags, dtype=float) / dx).astype(int)
    n_values = list(n_values)
    top = max(n_values)

    def run(reps):
        out = np.empty((len(reps), len(n_values), len(n_values), len(steps)))
        for i, r in enumerate(reps):
            eta = sampler.sample(seed, r)
            h0 = hermite_polynomials(eta[0], top)
            hx = hermite_polynomials(eta[np.mod(steps, n)], top)
            out[i] = np.einsum("a,bi->abi", h0[n_values], hx[n_values])
        return out

    vals = map_replicates(run, M, chunk=chunk, workers=workers)
    return vals, sampler.covariance(steps), steps * dx
