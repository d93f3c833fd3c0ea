"""Command-line entry point: ``spectral-scaling <subcommand> [options]``.

Exit status is 0 when every configured check passes, 1 when a check fails
and 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError
from .harness import SUBCOMMAND_SCENARIOS, ExperimentConfig, export, run

DEFAULT_SCENARIO = {
    "simulate": "heat-gaussian",
    "check-scaling": "heat-gaussian",
    "hermite-limit": "heat-nongaussian",
    "residual": "residual",
    "lemma-check": "lemma-check",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectral-scaling", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMAND_SCENARIOS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--seed", type=int, help="override the configured seed")
        p.add_argument("--replicates", type=int, help="Monte Carlo replicates M")
        p.add_argument("--out", default="results", help="output directory (default: results)")
        p.add_argument("--workers", type=int, default=1, help="worker threads for replicates")
        p.add_argument("--tolerance-scale", type=float, default=1.0,
                       help="multiply every tolerance by this factor")
    return parser


def load_config(args) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.load(args.config)
    else:
        cfg = ExperimentConfig(DEFAULT_SCENARIO[args.command])
    if args.seed is not None:
        if args.seed < 0 or args.seed >= 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        cfg.seed = args.seed
    if args.replicates is not None:
        if args.replicates < 0:
            raise ConfigError("replicates must be non-negative")
        cfg.replicates = args.replicates
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        result = run(cfg, args.command, workers=args.workers, tolerance_scale=args.tolerance_scale)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    csv_path, json_path = export(result, args.out)
    for name, ok in result.checks.items():
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    print(f"{'PASS' if result.passed else 'FAIL'}  {cfg.scenario}: {len(result.rows)} rows -> {csv_path}, {json_path}")
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())
