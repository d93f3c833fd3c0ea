import csv
import json

import pytest

from spectral_scaling.cli import main
from spectral_scaling.errors import ConfigError
from spectral_scaling.harness import (
    COLUMNS,
    ExperimentConfig,
    RunResult,
    build_G,
    export,
    run,
)


def write_config(tmp_path, **data):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    return str(path)


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestConfig:
    def test_defaults(self):
        assert ExperimentConfig("heat-gaussian").k == 0.5
        assert ExperimentConfig("heat-nongaussian").k == 0.6
        assert ExperimentConfig("heat-nongaussian").T_sweep == (10.0, 1e2, 1e3)

    @pytest.mark.parametrize("data", [
        {"scenario": "nope"},
        {"scenario": "heat-gaussian", "k": 1.2},
        {"scenario": "heat-gaussian", "T_sweep": [10, 5]},
        {"scenario": "heat-gaussian", "A": [1, -1]},
        {"scenario": "heat-gaussian", "bank": {}},
        {"scenario": "heat-gaussian", "bank": {"a": {"width": 0}}},
        {"scenario": "heat-gaussian", "tolerances": {"bogus": 1}},
        {"scenario": "heat-gaussian", "colour": "red"},
        {"k": 0.5},
    ])
    def test_rejects_bad_config(self, data):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(data)

    def test_round_trip(self):
        cfg = ExperimentConfig("pseudodiff", k=0.3)
        again = ExperimentConfig.from_dict(cfg.to_dict())
        assert again.to_dict() == cfg.to_dict()

    def test_G_builders(self):
        G, n = build_G({"polynomial": [-1.0, 0.0, 1.0]})
        assert G(2.0) == 3.0 and n >= 2
        G, n = build_G({"hermite": {"3": 0.5}})
        assert G(1.0) == pytest.approx(0.5 * (1.0 - 3.0))


class TestRunners:
    def test_mode_must_match_scenario(self):
        with pytest.raises(ConfigError):
            run(ExperimentConfig("residual"), "lemma-check")
        with pytest.raises(ConfigError):
            run(ExperimentConfig("residual"), "residual", workers=0)

    def test_check_scaling_heat(self):
        res = run(ExperimentConfig("heat-gaussian"), "check-scaling")
        assert res.passed
        assert len(res.rows) == 4
        assert res.checks["heat_self_similarity"]

    def test_pseudodiff_probes(self):
        cfg = ExperimentConfig("pseudodiff", probes=((1.0, 1.0), (0.5, 1.0), (2.0, 2.0)))
        res = run(cfg, "check-scaling")
        assert res.passed
        assert len(res.rows) == 12
        assert res.checks["limit_symbol_is_heat"]

    def test_residual_and_lemma(self):
        assert run(ExperimentConfig("residual"), "residual").passed
        assert run(ExperimentConfig("lemma-check"), "lemma-check").passed

    def test_empty_export_rejected(self, tmp_path):
        empty = RunResult([], {}, {}, ExperimentConfig("residual"))
        with pytest.raises(ValueError):
            export(empty, tmp_path)


class TestCLI:
    def test_exit_codes(self, tmp_path, capsys):
        out = str(tmp_path / "ok")
        assert main(["check-scaling", "--out", out]) == 0
        assert main(["check-scaling", "--config", write_config(tmp_path, scenario="heat-gaussian", k=1.2),
                     "--out", out]) == 2
        assert main(["lemma-check", "--config", str(tmp_path / "missing.json"), "--out", out]) == 2
        assert main(["residual", "--tolerance-scale", "-1", "--out", out]) == 2
        # an impossible tolerance turns a passing check into an assertion failure
        cfg = write_config(tmp_path, scenario="residual", tolerances={"residual": 1e-40})
        assert main(["residual", "--config", cfg, "--out", out]) == 1
        printed = capsys.readouterr().out
        assert "FAIL" in printed and "PASS" in printed

    def test_csv_layout(self, tmp_path):
        out = tmp_path / "o"
        assert main(["check-scaling", "--out", str(out)]) == 0
        with open(out / "results.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == COLUMNS
        assert len(rows) == 5
        summary = json.loads((out / "summary.json").read_text())
        assert summary["verdict"] == "PASS"

    def test_simulate_bytes_independent_of_workers(self, tmp_path):
        cfg = write_config(tmp_path, scenario="heat-gaussian", T_sweep=[10, 100], replicates=300, seed=7)
        a, b = tmp_path / "a", tmp_path / "b"
        main(["simulate", "--config", cfg, "--out", str(a), "--workers", "1"])
        main(["simulate", "--config", cfg, "--out", str(b), "--workers", "4"])
        for name in ("results.csv", "summary.json"):
            assert read(a / name) == read(b / name)

    def test_seed_changes_output(self, tmp_path):
        cfg = write_config(tmp_path, scenario="heat-gaussian", T_sweep=[10, 100], replicates=300)
        a, b = tmp_path / "a", tmp_path / "b"
        main(["simulate", "--config", cfg, "--out", str(a), "--seed", "1"])
        main(["simulate", "--config", cfg, "--out", str(b), "--seed", "2"])
        assert read(a / "results.csv") != read(b / "results.csv")

    def test_hermite_limit_small(self, tmp_path):
        cfg = write_config(tmp_path, scenario="heat-nongaussian", T_sweep=[10, 100],
                           replicates=1000, seed=2)
        out = tmp_path / "ng"
        main(["hermite-limit", "--config", cfg, "--out", str(out), "--workers", "2"])
        summary = json.loads((out / "summary.json").read_text())
        assert summary["checks"]["chaos_tail_non_increasing"]
        assert summary["checks"]["monte_carlo_matches_finite_T"]
