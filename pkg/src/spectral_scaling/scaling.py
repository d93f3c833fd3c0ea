"""Scaling transforms, rescaled solutions and the two scaling hypotheses.

A solution u(t) = e^{tL} eta_0 with spectral measure f dxi is rescaled as

    u^T(t, phi) = T^gamma u(T t)(nu_{T^beta} phi).

Convergence of u^T is checked through two deterministic L^2 distances:
the rescaled measure T^gamma nu_{T^alpha} Z_0 against the limit measure
(coupled on a common white noise), and the rescaled semigroup against the
limit semigroup, both tending to zero along a T-sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError
from .random_measure import SpectralDensity, power_gaussian, power_law, scale_measure_density
from .semigroup import MultiplierSymbol, bounded_symbol, heat_symbol
from .spectral_grid import FrequencyGrid, interval_integral, spectral_integral
from .stationary_field import _fourier

DEFAULT_SWEEP = (10.0, 1e2, 1e3, 1e4)


@dataclass(frozen=True)
class ScalingExponents:
    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class ScalingScenario:
    name: str
    initial: SpectralDensity
    symbol: MultiplierSymbol
    limit_density: SpectralDensity
    limit_symbol: MultiplierSymbol
    exponents: ScalingExponents
    T_sweep: tuple = DEFAULT_SWEEP
    bound_constant: Optional[float] = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        probe = np.linspace(-50.0, 50.0, 1001)
        if np.any(np.real(self.limit_symbol(probe)) > 0):
            raise ConfigError("limit symbol has positive real part")
        sweep = np.asarray(self.T_sweep, dtype=float)
        if np.any(sweep <= 0) or np.any(np.diff(sweep) <= 0):
            raise ConfigError("T sweep must be positive and strictly increasing")


def heat_gaussian_scenario(k: float = 0.5, T_sweep=DEFAULT_SWEEP) -> ScalingScenario:
    """Heat equation, f(xi) = |xi|^-k exp(-xi^2); limit density |x|^-k, alpha = beta = -1/2."""
    _check_k(k)
    exps = ScalingExponents(-0.5, -0.5, (1.0 - k) / 4.0)
    return ScalingScenario("heat-gaussian", power_gaussian(k), heat_symbol(), power_law(k),
                           heat_symbol(), exps, tuple(T_sweep), bound_constant=1.0,
                           info={"k": k})


def pseudodiff_scenario(k: float = 0.5, symbol: Optional[MultiplierSymbol] = None,
                        alpha: float = -0.5, limit_symbol: Optional[MultiplierSymbol] = None,
                        T_sweep=DEFAULT_SWEEP) -> ScalingScenario:
    """Self-similar initial density |x|^-k with a pseudo-differential symbol p.

    gamma = alpha (k - 1) / 2 makes the measure hypothesis exact; the limit
    symbol defaults to the one identified from p on a T-ladder.
    """
    _check_k(k)
    symbol = bounded_symbol() if symbol is None else symbol
    if limit_symbol is None:
        report = identify_limit_symbol(symbol, alpha)
        if not report.converged:
            raise ConfigError(f"limit symbol of {symbol.name} did not stabilise")
        limit_symbol = report.symbol
    exps = ScalingExponents(alpha, alpha, alpha * (k - 1.0) / 2.0)
    return ScalingScenario("pseudodiff", power_law(k), symbol, power_law(k), limit_symbol,
                           exps, tuple(T_sweep), info={"k": k})


def _check_k(k):
    if not 0.0 <= k < 1.0:
        raise ConfigError(f"k must lie in [0, 1), got {k}")


def rescaled_density(f: SpectralDensity, exps: ScalingExponents, T: float) -> SpectralDensity:
    """Density of T^gamma nu_{T^alpha} Z_0."""
    return scale_measure_density(f, T**exps.alpha, T**exps.gamma)


def measure_scaling_distance(f: SpectralDensity, f_limit: SpectralDensity,
                             exps: ScalingExponents, T: float, A=(-1.0, 1.0)) -> float:
    """E|T^gamma nu_{T^alpha} Z_0(A) - Z(A)|^2 for Z_0 = int sqrt(f) dW, Z = int sqrt(f_lim) dW."""
    a, b = map(float, A)
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        raise ValueError("A must be a bounded interval")
    scaled = rescaled_density(f, exps, T)
    k = max(f.origin_exponent, f_limit.origin_exponent)

    def integrand(x):
        return (np.sqrt(scaled(x)) - np.sqrt(f_limit(x))) ** 2

    return float(interval_integral(integrand, a, b, k).real)


def semigroup_scaling_distance(p: MultiplierSymbol, q: MultiplierSymbol, phi, t: float,
                               exps: ScalingExponents, f: SpectralDensity, T: float) -> float:
    """T^{2 gamma} int |F(e^{tT L*} nu_{T^beta} phi) - F(nu_{T^alpha} e^{t Q*} phi)|^2 f dxi.

    Evaluated after the substitution xi = T^alpha x, which keeps the
    integrand on the scale of F phi for every T.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0 and exps.alpha == exps.beta:
        return 0.0
    F = _fourier(phi)
    Ta = T**exps.alpha
    shift = T ** (exps.alpha - exps.beta)
    weight = rescaled_density(f, exps, T)

    def integrand(x):
        left = np.exp(t * T * np.conj(p(Ta * x))) * F(shift * x)
        right = np.exp(t * np.conj(q(x))) * F(x)
        return np.abs(left - right) ** 2 * weight(x)

    return float(spectral_integral(integrand, f.origin_exponent).real)


def rescaled_solution_covariance(scenario: ScalingScenario, T: float, t: float, s: float,
                                 phi, psi, reference_grid: Optional[FrequencyGrid] = None) -> float:
    """E u^T(t, phi) u^T(s, psi) on a grid in the original frequency variable.

    The grid is ``reference_grid`` scaled by T^beta so that F phi(xi / T^beta)
    is always sampled on the reference nodes.
    """
    if t < 0 or s < 0:
        raise ValueError("times must be non-negative")
    ref = default_reference_grid() if reference_grid is None else reference_grid
    exps = scenario.exponents
    grid = ref.scaled(T**exps.beta)
    masses = scenario.initial.masses(grid)
    xi = grid.nodes
    pc = np.conj(scenario.symbol(xi))
    x = ref.nodes
    a = np.exp(t * T * pc) * _fourier(phi)(x)
    b = np.exp(s * T * pc) * _fourier(psi)(x)
    return float(T ** (2 * exps.gamma) * np.sum(a * np.conj(b) * masses).real)


def default_reference_grid() -> FrequencyGrid:
    return FrequencyGrid.covering(10.0, 1e-3)


def limit_covariance(f_limit: SpectralDensity, q: MultiplierSymbol, t: float, s: float,
                     phi, psi) -> float:
    """int e^{t conj q} conj(e^{s conj q}) F phi conj(F psi) f_lim du by singular-aware quadrature."""
    if t < 0 or s < 0:
        raise ValueError("times must be non-negative")
    if t == 0 and s == 0 and not f_limit.integrable:
        raise ConfigError(
            "limit spectral density is not integrable: the limit initial condition is "
            "generalised only and has no regular representation at t = s = 0")
    F, G = _fourier(phi), _fourier(psi)

    def integrand(u):
        qc = np.conj(q(u))
        return np.exp(t * qc) * np.conj(np.exp(s * qc)) * F(u) * np.conj(G(u)) * f_limit(u)

    return float(spectral_integral(integrand, f_limit.origin_exponent).real)


@dataclass(frozen=True)
class LimitSymbolReport:
    converged: bool
    q_at_one: Optional[float]
    exponent: float
    fitted_exponent: Optional[float]
    ladder: tuple
    probes: tuple
    table: np.ndarray
    symbol: Optional[MultiplierSymbol]

    @property
    def fractional_order(self) -> float:
        """s with Q = -c(-Laplacian)^s."""
        return self.exponent / 2.0


def identify_limit_symbol(p: MultiplierSymbol, alpha: float, probes=(0.5, 1.0, 2.0),
                          ladder=(1e2, 1e3, 1e4, 1e5, 1e6), rtol: float = 1e-3) -> LimitSymbolReport:
    """q(x) = lim T p(T^alpha x), tabulated on a T-ladder.

    Converged when the top two rungs agree to ``rtol`` (relative) at every
    probe and q is real and non-positive there; q(1) is read from the top
    rung and the power-law form q(1)|x|^{-1/alpha} is checked against the
    probes. Non-convergence is reported, not hidden.
    """
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    probes = tuple(float(x) for x in probes)
    if 1.0 not in probes:
        probes = tuple(sorted(probes + (1.0,)))
    ladder = tuple(float(T) for T in ladder)
    xs = np.asarray(probes)
    table = np.array([T * p(T**alpha * xs) for T in ladder])
    top, prev = table[-1], table[-2]
    scale = np.maximum(np.abs(top), np.finfo(float).tiny)
    stable = bool(np.all(np.abs(top - prev) <= rtol * scale))
    real = bool(np.all(np.abs(np.imag(top)) <= rtol * scale))
    q_vals = np.real(top)
    exponent = -1.0 / alpha
    q1 = float(q_vals[probes.index(1.0)])
    fitted = None
    nz = (xs != 1.0) & (q_vals != 0)
    if q1 != 0 and np.any(nz):
        fitted = float(np.mean(np.log(q_vals[nz] / q1) / np.log(np.abs(xs[nz]))))
    shape_ok = fitted is not None and abs(fitted - exponent) <= 10 * rtol * max(1.0, exponent)
    converged = stable and real and bool(np.all(q_vals <= 0)) and shape_ok
    symbol = None
    if converged:
        c = q1
        symbol = MultiplierSymbol(lambda xi: c * np.abs(xi) ** exponent + 0.0,
                                  f"limit({p.name})")
    return LimitSymbolReport(converged, q1 if converged else None, exponent, fitted,
                             ladder, probes, table, symbol)


def check_limit_bound(f: SpectralDensity, k: float, T_sweep: Sequence[float],
                      bound: Optional[float] = None, probes=None) -> dict:
    """Check T^{-k/2} f(x / sqrt T) |x|^k -> 1 and <= bound on a probe set.

    Raises ConfigError naming the violated condition.
    """
    probes = np.concatenate([-np.logspace(-3, 1.5, 40), np.logspace(-3, 1.5, 40)]) \
        if probes is None else np.asarray(probes, dtype=float)
    ratios = np.array([T ** (-k / 2.0) * f(probes / np.sqrt(T)) * np.abs(probes) ** k
                       for T in T_sweep])
    sup = float(np.max(ratios))
    if bound is not None and sup > bound * (1 + 1e-12):
        raise ConfigError(
            f"limit-bound violated: T^(-k/2) f(x/sqrt(T)) exceeds {bound:g}|x|^(-k) "
            f"(max ratio {sup:.6g})")
    inner = np.abs(probes) <= 1.0
    errors = np.max(np.abs(ratios[:, inner] - 1.0), axis=1)
    if not np.all(np.diff(errors) <= 1e-15) or errors[-1] > 0.5:
        raise ConfigError(
            "limit-bound violated: T^(-k/2) f(x/sqrt(T)) |x|^k does not approach 1 "
            f"(errors along the sweep {errors.tolist()})")
    return {"sup_ratio": sup, "limit_errors": errors}


@dataclass
class SweepRecord:
    T: float
    t: float
    s: float
    phi_id: str
    psi_id: str
    rescaled_cov: float
    limit_cov: float
    measure_distance: float
    semigroup_distance: float

    @property
    def gap(self) -> float:
        return abs(self.rescaled_cov - self.limit_cov)

    @property
    def relative_gap(self) -> float:
        return self.gap / abs(self.limit_cov)


def scaling_sweep(scenario: ScalingScenario, bank: dict, probes=((1.0, 1.0),), A=(-1.0, 1.0),
                  reference_grid: Optional[FrequencyGrid] = None) -> list:
    """Distances and covariances for every T, (t, s) probe and test-function pair.

    ``bank`` maps ids to test functions; pairs are (id, id) for every id plus
    consecutive ids.  The semigroup distance is reported for phi.
    """
    exps = scenario.exponents
    ids = list(bank)
    pairs = [(i, i) for i in ids] + list(zip(ids[:-1], ids[1:]))
    limits = {}
    for (t, s) in probes:
        for (i, j) in pairs:
            limits[t, s, i, j] = limit_covariance(scenario.limit_density, scenario.limit_symbol,
                                                  t, s, bank[i], bank[j])
    records = []
    for T in scenario.T_sweep:
        md = measure_scaling_distance(scenario.initial, scenario.limit_density, exps, T, A)
        for (t, s) in probes:
            for (i, j) in pairs:
                sd = semigroup_scaling_distance(scenario.symbol, scenario.limit_symbol, bank[i],
                                                t, exps, scenario.initial, T)
                rc = rescaled_solution_covariance(scenario, T, t, s, bank[i], bank[j],
                                                  reference_grid)
                records.append(SweepRecord(T, t, s, i, j, rc, limits[t, s, i, j], md, sd))
    return records
