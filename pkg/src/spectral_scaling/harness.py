"""Experiment configuration, scenario runners and byte-stable result export.

A configuration is a JSON object; every key is optional except ``scenario``.

    scenario     heat-gaussian | pseudodiff | heat-nongaussian | residual | lemma-check
    k            spectral exponent (heat-gaussian, pseudodiff, heat-nongaussian)
    T_sweep      strictly increasing list of scaling parameters
    probes       list of [t, s] time pairs
    bank         {id: {"center": c, "width": w, "amplitude": a}} Gaussian test functions
    grid         {"extent": X, "spacing": dx} reference frequency grid
    space        {"dx": h, "rel_dxi": r} space grid of the sampled regular field
    symbol       {"name": "bounded" | "heat" | "fractional" | "drift", ...} (pseudodiff)
    alpha        scaling exponent of the pseudodiff scenario
    G            {"hermite": {"n": a_n}} for G = sum a_n He_n, or {"polynomial": [a_0, a_1, ...]}
    profile      {"name": "cauchy" | "power-exponential"} covariance profile (heat-nongaussian)
    A            bounded interval for measure distances and chaos tails
    symbols      list of symbol specs (residual)
    time_steps   time-step ladder (residual)
    profiles     list of {"name": "exponential" | "cauchy" | "box", "power": p} (lemma-check)
    replicates   Monte Carlo replicates M (0 means quadrature only)
    seed         non-negative integer
    tolerances   overrides of DEFAULT_TOLERANCES
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import numpy as np

from . import hermite as hc
from .errors import ConfigError, ZeroMeanError
from .montecarlo import covariance_with_jackknife, map_replicates
from .random_measure import hermitian_normals, power_gaussian
from .scaling import (
    check_limit_bound,
    heat_gaussian_scenario,
    identify_limit_symbol,
    pseudodiff_scenario,
    scaling_sweep,
)
from .semigroup import (
    bounded_symbol,
    drift_diffusion_symbol,
    fractional_symbol,
    heat_symbol,
    residual_ladder,
)
from .spectral_grid import FrequencyGrid, bump_in_time, gaussian
from .stationary_field import _fourier

SCENARIOS = ("heat-gaussian", "pseudodiff", "heat-nongaussian", "residual", "lemma-check")

DEFAULT_TOLERANCES = {
    "z_max": 5.0,            # Monte Carlo agreement in standard errors
    "gap_rel": 1e-2,         # covariance gap at the top of the sweep
    "self_similarity": 1e-14,
    "semigroup_top": 1e-2,   # pseudodiff semigroup distance at the top of the sweep
    "q_one": 1e-3,           # identified q(1) against -1
    "residual": 1e-6,        # residual energy at the finest step
    "residual_order": 1.9,
    "lemma": 1e-8,
    "monotone_floor": 1e-14,  # values below this count as converged, not as increases
}

COLUMNS = ("scenario", "T", "t", "s", "phi_id", "psi_id", "empirical_cov", "stderr",
           "oracle_cov", "limit_cov", "measure_distance", "semigroup_distance",
           "metric", "value", "pass")


def _default_sweep(scenario):
    return (10.0, 1e2, 1e3) if scenario == "heat-nongaussian" else (10.0, 1e2, 1e3, 1e4)


@dataclass
class ExperimentConfig:
    scenario: str
    k: Optional[float] = None
    T_sweep: tuple = ()
    probes: tuple = ((1.0, 1.0),)
    bank: dict = field(default_factory=lambda: {"g0": {"center": 0.0, "width": 1.0, "amplitude": 1.0}})
    grid: dict = field(default_factory=lambda: {"extent": 10.0, "spacing": 1e-3})
    space: dict = field(default_factory=lambda: {"dx": 0.5, "rel_dxi": 0.02})
    symbol: dict = field(default_factory=lambda: {"name": "bounded"})
    alpha: float = -0.5
    G: dict = field(default_factory=lambda: {"hermite": {"2": 1.0}})
    profile: dict = field(default_factory=lambda: {"name": "cauchy"})
    A: tuple = (-1.0, 1.0)
    symbols: tuple = ({"name": "heat"}, {"name": "fractional", "c": 1.0, "s": 0.5},
                      {"name": "bounded"}, {"name": "drift", "drift": 1.0})
    time_steps: tuple = (4e-3, 2e-3, 1e-3)
    profiles: tuple = ({"name": "exponential"}, {"name": "cauchy", "power": -0.7, "window": 1000.0,
                                                 "dx": 0.01})
    replicates: int = 0
    seed: int = 0
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose one of {', '.join(SCENARIOS)}")
        if self.k is None:
            self.k = 0.6 if self.scenario == "heat-nongaussian" else 0.5
        self.k = float(self.k)
        if not 0.0 <= self.k < 1.0:
            raise ConfigError(f"k must lie in [0, 1), got {self.k:g}")
        sweep = tuple(float(T) for T in (self.T_sweep or _default_sweep(self.scenario)))
        if not sweep or any(T <= 0 for T in sweep) or any(b <= a for a, b in zip(sweep, sweep[1:])):
            raise ConfigError("T sweep must be positive and strictly increasing")
        self.T_sweep = sweep
        self.probes = tuple((float(t), float(s)) for t, s in self.probes)
        if any(t < 0 or s < 0 for t, s in self.probes):
            raise ConfigError("time probes must be non-negative")
        a, b = (float(v) for v in self.A)
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ConfigError("A must be a bounded interval")
        self.A = (a, b)
        if int(self.replicates) < 0 or int(self.seed) < 0:
            raise ConfigError("replicates and seed must be non-negative")
        self.replicates, self.seed = int(self.replicates), int(self.seed)
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
        if not self.bank:
            raise ConfigError("test-function bank is empty")
        for key, spec in self.bank.items():
            if float(spec.get("width", 1.0)) <= 0:
                raise ConfigError(f"test function {key!r} needs a positive width")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        if "scenario" not in data:
            raise ConfigError("configuration needs a scenario")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        return cls.from_dict(data)

    def tolerance(self, key: str, scale: float = 1.0) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key])) * scale

    def to_dict(self) -> dict:
        return json.loads(json.dumps(asdict(self)))


@dataclass
class ResultRow:
    scenario: str
    T: Optional[float] = None
    t: Optional[float] = None
    s: Optional[float] = None
    phi_id: str = ""
    psi_id: str = ""
    empirical_cov: Optional[float] = None
    stderr: Optional[float] = None
    oracle_cov: Optional[float] = None
    limit_cov: Optional[float] = None
    measure_distance: Optional[float] = None
    semigroup_distance: Optional[float] = None
    metric: str = ""
    value: Optional[float] = None
    passed: Optional[bool] = None

    def __post_init__(self):
        if self.stderr is not None and self.stderr < 0:
            raise ValueError("stderr must be non-negative")


@dataclass
class RunResult:
    rows: list
    checks: dict
    details: dict
    config: ExperimentConfig

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def summary(self) -> dict:
        cfg = self.config.to_dict()
        return {
            "scenario": self.config.scenario,
            "verdict": "PASS" if self.passed else "FAIL",
            "checks": {k: bool(v) for k, v in self.checks.items()},
            "details": _jsonable(self.details),
            "config": cfg,
            "rows": len(self.rows),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(repr(float(obj))) if math.isfinite(obj) else str(float(obj))
    return obj


# ---------------------------------------------------------------------------
# builders


def build_bank(spec: dict) -> dict:
    return {key: gaussian(float(v.get("center", 0.0)), float(v.get("width", 1.0)),
                          float(v.get("amplitude", 1.0))) for key, v in spec.items()}


def build_symbol(spec: dict):
    name = spec.get("name")
    if name == "heat":
        return heat_symbol()
    if name == "bounded":
        return bounded_symbol()
    if name == "fractional":
        return fractional_symbol(float(spec.get("c", 1.0)), float(spec.get("s", 0.5)))
    if name == "drift":
        return drift_diffusion_symbol(float(spec.get("drift", 1.0)))
    raise ConfigError(f"unknown symbol {name!r}")


def build_G(spec: dict):
    if "hermite" in spec:
        terms = {int(n): float(a) for n, a in spec["hermite"].items()}
        top = max(terms)

        def G(x):
            H = hc.hermite_polynomials(x, top)
            return sum(a * H[n] for n, a in terms.items())

        return G, max(top + 2, 10)
    if "polynomial" in spec:
        coeffs = [float(a) for a in spec["polynomial"]]
        return (lambda x: np.polynomial.polynomial.polyval(x, coeffs)), max(len(coeffs) + 1, 10)
    raise ConfigError("G needs a 'hermite' or 'polynomial' specification")


def build_profile(spec: dict, k: float):
    name = spec.get("name", "cauchy")
    if not 0.0 < k < 1.0:
        raise ConfigError("the covariance profile needs k in (0, 1)")
    if name == "cauchy":
        return hc.cauchy_profile(k)
    if name == "power-exponential":
        return hc.power_exponential_profile(k)
    raise ConfigError(f"unknown covariance profile {name!r}")


def build_lemma_R(spec: dict):
    name = spec.get("name")
    if name == "exponential":
        return lambda x: np.exp(-np.asarray(x))
    if name == "cauchy":
        p = float(spec.get("power", -0.7))
        if p >= 0:
            raise ConfigError("cauchy profile power must be negative")
        return lambda x: (1.0 + np.asarray(x) ** 2) ** p
    if name == "box":
        return lambda x: (np.asarray(x) <= 1.0).astype(float)
    raise ConfigError(f"unknown lemma profile {name!r}")


def _label(spec: dict) -> str:
    return ";".join(f"{k}={spec[k]}" for k in sorted(spec))


def _non_increasing(values, floor: float) -> bool:
    v = np.asarray(values, dtype=float)
    return bool(np.all((np.diff(v) <= 0) | (v[1:] <= floor)))


def _decreasing(values) -> bool:
    return bool(np.all(np.diff(np.asarray(values, dtype=float)) < 0))


# ---------------------------------------------------------------------------
# scenarios


def _gaussian_scenario(cfg: ExperimentConfig):
    if cfg.scenario == "heat-gaussian":
        scen = heat_gaussian_scenario(cfg.k, cfg.T_sweep)
        check_limit_bound(scen.initial, cfg.k, cfg.T_sweep, scen.bound_constant)
        return scen
    return pseudodiff_scenario(cfg.k, build_symbol(cfg.symbol), cfg.alpha, T_sweep=cfg.T_sweep)


def _mc_rescaled(scen, cfg, T, t, s, phi, psi, ref, workers):
    """Sampled E u^T(t, phi) u^T(s, psi) on the scaled reference grid."""
    exps = scen.exponents
    grid = ref.scaled(T ** exps.beta)
    masses = scen.initial.masses(grid)
    N = grid.half_width
    pc = np.conj(scen.symbol(grid.nodes))
    x = ref.nodes
    wa = T ** exps.gamma * np.exp(t * T * pc) * _fourier(phi)(x)
    wb = T ** exps.gamma * np.exp(s * T * pc) * _fourier(psi)(x)
    # only the non-negative half is drawn; Z_{-j} = conj(Z_j) folds the sum
    fa = np.concatenate([[wa[N]], wa[N + 1:] + np.conj(wa[N - 1::-1])])
    fb = np.concatenate([[wb[N]], wb[N + 1:] + np.conj(wb[N - 1::-1])])
    amp = np.sqrt(masses[N:])
    amp[1:] /= math.sqrt(2.0)

    def run(reps):
        out = np.empty((len(reps), 2))
        for i, r in enumerate(reps):
            A, B = hermitian_normals(cfg.seed, r, N + 1)
            z = amp * (A + 1j * B)
            z[0] = amp[0] * A[0]
            out[i] = (fa @ z).real, (fb @ z).real
        return out

    vals = map_replicates(run, cfg.replicates, chunk=64, workers=workers)
    return covariance_with_jackknife(vals[:, 0], vals[:, 1])


def run_gaussian(cfg: ExperimentConfig, monte_carlo: bool, workers: int = 1, scale: float = 1.0) -> RunResult:
    scen = _gaussian_scenario(cfg)
    bank = build_bank(cfg.bank)
    ref = FrequencyGrid.covering(float(cfg.grid["extent"]), float(cfg.grid["spacing"]))
    records = scaling_sweep(scen, bank, cfg.probes, cfg.A, ref)
    z_max = cfg.tolerance("z_max", scale)
    floor = cfg.tolerance("monotone_floor", scale)
    rows, checks, details = [], {}, {}
    mc_ok = True
    for rec in records:
        row = ResultRow(cfg.scenario, rec.T, rec.t, rec.s, rec.phi_id, rec.psi_id,
                        oracle_cov=rec.rescaled_cov, limit_cov=rec.limit_cov,
                        measure_distance=rec.measure_distance,
                        semigroup_distance=rec.semigroup_distance,
                        metric="relative_gap", value=rec.relative_gap)
        if monte_carlo:
            est = _mc_rescaled(scen, cfg, rec.T, rec.t, rec.s, bank[rec.phi_id], bank[rec.psi_id],
                               ref, workers)
            row.empirical_cov, row.stderr = est.estimate, est.stderr
            row.passed = abs(est.zscore(rec.rescaled_cov)) <= z_max
            mc_ok &= row.passed
        rows.append(row)
    Ts = list(cfg.T_sweep)
    first = [r for r in records if r.T == Ts[0]]
    md = [next(r.measure_distance for r in records if r.T == T) for T in Ts]
    checks["measure_distance_non_increasing"] = _non_increasing(md, floor)
    details["measure_distance"] = md
    keys = [(r.t, r.s, r.phi_id, r.psi_id) for r in first]
    sg_ok, gap_ok, top_ok = True, True, True
    for key in keys:
        series = [r for r in records if (r.t, r.s, r.phi_id, r.psi_id) == key]
        sg_ok &= _non_increasing([r.semigroup_distance for r in series], floor)
        gap_ok &= _non_increasing([r.gap for r in series], floor)
        top_ok &= series[-1].relative_gap < cfg.tolerance("gap_rel", scale)
    checks["semigroup_distance_non_increasing"] = sg_ok
    checks["covariance_gap_non_increasing"] = gap_ok
    checks["relative_gap_at_top"] = top_ok
    details["relative_gap_at_top"] = max(r.relative_gap for r in records if r.T == Ts[-1])
    if cfg.scenario == "heat-gaussian":
        worst = max(r.semigroup_distance for r in records)
        checks["heat_self_similarity"] = worst < cfg.tolerance("self_similarity", scale)
        details["semigroup_distance_max"] = worst
    else:
        rep = identify_limit_symbol(build_symbol(cfg.symbol), cfg.alpha)
        details["q_at_one"] = rep.q_at_one
        details["limit_exponent"] = rep.exponent
        checks["limit_symbol_identified"] = rep.converged
        if cfg.symbol.get("name") in ("bounded", "heat") and cfg.alpha == -0.5:
            # both symbols have the heat limit q(x) = -x^2
            checks["limit_symbol_is_heat"] = (rep.converged and rep.exponent == 2.0
                                             and abs(rep.q_at_one + 1.0) <= cfg.tolerance("q_one", scale))
        top = max(r.semigroup_distance for r in records if r.T == Ts[-1])
        details["semigroup_distance_at_top"] = top
        checks["semigroup_distance_at_top"] = top < cfg.tolerance("semigroup_top", scale)
    if monte_carlo:
        checks["monte_carlo_matches_oracle"] = mc_ok
    return RunResult(rows, checks, details, cfg)


def run_nongaussian(cfg: ExperimentConfig, workers: int = 1, scale: float = 1.0) -> RunResult:
    G, n_max = build_G(cfg.G)
    expansion = hc.hermite_coefficients(G, n_max)
    try:
        expansion.require_zero_mean()
        m = expansion.rank
    except (ZeroMeanError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if not 1.0 - 1.0 / m <= cfg.k < 1.0:
        raise ConfigError(f"k = {cfg.k:g} outside [1 - 1/m, 1) = [{1 - 1 / m:g}, 1) for Hermite rank {m}")
    profile = build_profile(cfg.profile, cfg.k)
    bank = build_bank(cfg.bank)
    M = cfg.replicates or 10_000
    z_max = cfg.tolerance("z_max", scale)
    Ts = list(cfg.T_sweep)
    tails = hc.chaos_tail_bound(profile.density, expansion, m, cfg.k, Ts, cfg.A)
    c_m = float(expansion.coefficients[m])
    rows, checks, details = [], {}, {"rank": m, "coefficients": expansion.coefficients,
                                      "chaos_tail_bound": tails}
    oracle_ok, top_ok, gap_ok = True, True, True
    ids = list(bank)
    for (t, s) in cfg.probes:
        for i in ids:
            phi = bank[i]
            limit = hc.nongaussian_limit_covariance(phi, phi, t, s, m, cfg.k, c_m=c_m)
            gaps = []
            for T, tail in zip(Ts, tails):
                run = hc.mc_nongaussian_rescaled(
                    G, profile, t, T, phi, cfg.seed, M, s=s, psi=phi, m=m,
                    dx=float(cfg.space["dx"]), rel_dxi=float(cfg.space["rel_dxi"]),
                    workers=workers, expansion=expansion)
                est = run.estimate
                exact = hc.rescaled_nongaussian_covariance(profile, expansion, T, t, s, phi, phi, m=m)
                ok = abs(est.zscore(exact)) <= z_max
                oracle_ok &= ok
                gaps.append(abs(est.estimate - limit))
                rows.append(ResultRow(cfg.scenario, T, t, s, i, i, est.estimate, est.stderr, exact, limit,
                                      metric="chaos_tail_bound", value=float(tail), passed=ok))
            top = rows[-1]
            top_ok &= abs(top.empirical_cov - limit) <= z_max * top.stderr
            gap_ok &= _decreasing(gaps)
            details[f"limit_zscore[{i},{t:g},{s:g}]"] = (top.empirical_cov - limit) / top.stderr
    checks["chaos_tail_non_increasing"] = _non_increasing(tails, cfg.tolerance("monotone_floor", scale))
    checks["monte_carlo_matches_finite_T"] = oracle_ok
    checks["monte_carlo_matches_limit_at_top"] = top_ok
    checks["limit_gap_decreasing"] = gap_ok
    return RunResult(rows, checks, details, cfg)


def run_residual(cfg: ExperimentConfig, scale: float = 1.0) -> RunResult:
    density = power_gaussian(cfg.k)
    grid = FrequencyGrid.covering(float(cfg.grid["extent"]), float(cfg.grid["spacing"]))
    phi = next(iter(build_bank(cfg.bank).values()))
    psi = bump_in_time(phi)
    steps = tuple(float(h) for h in cfg.time_steps)
    rows, checks, details = [], {}, {}
    for spec in cfg.symbols:
        sym = build_symbol(spec)
        energies, orders = residual_ladder(sym, psi, density, grid, steps)
        small = energies[-1] < cfg.tolerance("residual", scale)
        order_ok = bool(np.all(orders >= cfg.tolerance("residual_order")))
        name = _label(spec)
        for h, e in zip(steps, energies):
            rows.append(ResultRow(cfg.scenario, t=h, phi_id=name, metric="residual_energy", value=e,
                                  passed=bool(e < cfg.tolerance("residual", scale)) if h == steps[-1] else None))
        for h, o in zip(steps[1:], orders):
            rows.append(ResultRow(cfg.scenario, t=h, phi_id=name, metric="observed_order", value=o,
                                  passed=bool(o >= cfg.tolerance("residual_order"))))
        checks[f"residual[{name}]"] = small
        checks[f"order[{name}]"] = order_ok
    return RunResult(rows, checks, details, cfg)


def run_lemma(cfg: ExperimentConfig, scale: float = 1.0) -> RunResult:
    rows, checks, details = [], {}, {}
    for spec in cfg.profiles:
        R = build_lemma_R(spec)
        name = _label(spec)
        rep = hc.appendix_lemma_check(R, n_max=int(spec.get("n_max", 10)),
                                      window=float(spec.get("window", 200.0)),
                                      dx=float(spec.get("dx", 1e-3)),
                                      tolerance=cfg.tolerance("lemma", scale))
        details[f"T[{name}]"] = rep.T
        details[f"delta[{name}]"] = rep.delta
        for n in range(rep.differences.shape[0]):
            margin = float(rep.differences[n].min())
            rows.append(ResultRow(cfg.scenario, T=rep.T, phi_id=name, metric=f"min_margin_n{n + 1}",
                                  value=margin, passed=margin >= -rep.tolerance))
        checks[f"lemma[{name}]"] = rep.passed
    return RunResult(rows, checks, details, cfg)


SUBCOMMAND_SCENARIOS = {
    "simulate": ("heat-gaussian", "pseudodiff", "heat-nongaussian"),
    "check-scaling": ("heat-gaussian", "pseudodiff"),
    "hermite-limit": ("heat-nongaussian",),
    "residual": ("residual",),
    "lemma-check": ("lemma-check",),
}


def run(cfg: ExperimentConfig, mode: str = "check-scaling", workers: int = 1,
        tolerance_scale: float = 1.0) -> RunResult:
    """Run one scenario; ``mode`` is a CLI subcommand name."""
    allowed = SUBCOMMAND_SCENARIOS.get(mode)
    if allowed is None:
        raise ConfigError(f"unknown mode {mode!r}")
    if cfg.scenario not in allowed:
        raise ConfigError(f"{mode} does not run scenario {cfg.scenario!r}; expected one of {', '.join(allowed)}")
    if not tolerance_scale > 0:
        raise ConfigError("tolerance scale must be positive")
    if workers < 1:
        raise ConfigError("workers must be at least 1")
    if cfg.scenario in ("heat-gaussian", "pseudodiff"):
        if mode == "simulate" and cfg.replicates == 0:
            cfg.replicates = 2000
        return run_gaussian(cfg, mode == "simulate", workers, tolerance_scale)
    if cfg.scenario == "heat-nongaussian":
        return run_nongaussian(cfg, workers, tolerance_scale)
    if cfg.scenario == "residual":
        return run_residual(cfg, tolerance_scale)
    return run_lemma(cfg, tolerance_scale)


# ---------------------------------------------------------------------------
# export


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def results_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in rows:
        d = asdict(r)
        d["pass"] = d.pop("passed")
        writer.writerow([_cell(d[c]) for c in COLUMNS])
    return buf.getvalue()


def summary_json(result: RunResult) -> str:
    return json.dumps(result.summary(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def export(result: RunResult, out_dir) -> tuple:
    """Write results.csv and summary.json into ``out_dir``; returns both paths."""
    if not result.rows:
        raise ValueError("no results to export")
    try:
        os.makedirs(out_dir, exist_ok=True)
        csv_path = os.path.join(out_dir, "results.csv")
        json_path = os.path.join(out_dir, "summary.json")
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(results_csv(result.rows))
        with open(json_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(summary_json(result))
    except OSError as exc:
        raise OSError(f"cannot write results to {out_dir}: {exc}") from exc
    return csv_path, json_path
