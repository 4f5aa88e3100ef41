"""Config plumbing, report determinism, row statuses, CLI contract."""

import json
import math
import os

import pytest

from pwenv import (
    CheckRow,
    ExperimentConfig,
    InvalidArgumentError,
    VerificationReport,
    check_projection,
    check_spectral_growth,
    run_all,
)
from pwenv.cli import main as cli_main
from pwenv.harness import _row


def test_config_defaults_are_valid():
    cfg = ExperimentConfig()
    assert cfg.suite == "all"
    assert cfg.quadrature().rel_tolerance == pytest.approx(1e-3)


@pytest.mark.parametrize("bad", [
    {"suite": "nonsense"},
    {"quad_profile": "turbo"},
    {"p_grid": ()},
    {"p_grid": (0.5, 3.0)},
    {"y_grid": (-1.0,)},
    {"k_list": (1,)},
    {"counterexample_p": 1.0},
    {"qpair": (0.75, 0.5)},
    {"envelope_pairs": ((0.5, 0.4),)},
    {"n_random_pairs": 0},
    {"seed": -1},
    {"oracle_epsrel": 0.5},
])
def test_config_rejects_bad_values(bad):
    with pytest.raises(InvalidArgumentError):
        ExperimentConfig(**bad)


def test_config_json_roundtrip():
    cfg = ExperimentConfig(suite="growth", seed=7, quad_overrides={"rel_tolerance": 1e-4})
    back = ExperimentConfig.from_dict(cfg.to_json_dict())
    assert back == cfg


def test_config_rejects_unknown_keys():
    with pytest.raises(InvalidArgumentError):
        ExperimentConfig.from_dict({"sweeeet": 1})


def test_row_status_rules():
    assert _row("c", {}, 1.0, 1.0, 0.0, 0.0).status == "pass"
    assert _row("c", {}, 1.0, 1.0, -0.5, 0.1).status == "fail"
    assert _row("c", {}, 1.0, 1.0, -0.05, 0.1).status == "pass"
    assert _row("c", {}, 1.0, 1.0, 0.0, 0.0, flags=("low-confidence:x",)).status == "low-confidence"
    assert _row("c", {}, 1.0, 1.0, -9.0, 0.0, report_only=True).status == "report-only"


def test_report_summary_and_failures():
    rows = [
        _row("a", {"i": 1}, 1.0, 1.0, 0.0, 0.0),
        _row("b", {"i": 2}, 0.0, 1.0, -1.0, 0.1),
        _row("c", {"i": 3}, 0.0, 0.0, 0.0, 0.0, report_only=True),
    ]
    rep = VerificationReport("demo", rows, {})
    assert rep.summary == {"pass": 1, "fail": 1, "low-confidence": 0,
                           "report-only": 1, "total": 3}
    assert not rep.passed
    assert [r.check for r in rep.failures()] == ["b"]


def test_projection_suite_all_green(fast_quad):
    rep = check_projection(ExperimentConfig(suite="projection"))
    assert rep.passed
    checks = {r.check for r in rep.rows}
    assert {"projection-roundtrip", "recombination-identity", "embedding-isometry"} <= checks


def test_growth_suite_is_report_only():
    rep = check_spectral_growth(ExperimentConfig(suite="growth"))
    assert all(r.status == "report-only" for r in rep.rows)
    zero_rows = [r for r in rep.rows if r.inputs.get("function") == "zero"]
    assert len(zero_rows) == 1 and zero_rows[0].lhs == 0.0
    scaling = [r for r in rep.rows if r.check == "spectral-growth-scaling"]
    assert scaling and all(r.lhs == pytest.approx(2.0, rel=1e-12) for r in scaling)


def test_reports_are_byte_stable(tmp_path):
    cfg_a = ExperimentConfig(suite="growth", out_dir=str(tmp_path / "a"))
    cfg_b = ExperimentConfig(suite="growth", out_dir=str(tmp_path / "b"))
    run_all(cfg_a)
    run_all(cfg_b)
    for ext in ("json", "csv"):
        pa = tmp_path / "a" / f"growth.{ext}"
        pb = tmp_path / "b" / f"growth.{ext}"
        assert pa.read_bytes() == pb.read_bytes()


def test_report_json_shape(tmp_path):
    cfg = ExperimentConfig(suite="growth", out_dir=str(tmp_path))
    run_all(cfg)
    payload = json.loads((tmp_path / "growth.json").read_text())
    assert set(payload) == {"suite", "config", "summary", "rows"}
    row = payload["rows"][0]
    assert set(row) == {"check", "inputs", "lhs", "rhs", "margin", "budget", "status", "note"}


def test_checkrow_is_frozen():
    row = CheckRow("c", {}, 1.0, 2.0, 1.0, 0.0, "pass")
    with pytest.raises(AttributeError):
        row.status = "fail"


# -- command line -----------------------------------------------------------------


def test_cli_norms_writes_table(tmp_path, capsys):
    rc = cli_main(["norms", "--out", str(tmp_path)])
    assert rc == 0
    table = json.loads((tmp_path / "norms.json").read_text())
    assert {"config", "norms"} <= set(table)
    first = table["norms"][0]
    assert {"function", "p", "report"} <= set(first)
    assert set(first["report"]) == {"value", "err", "tail", "flags"}
    out = capsys.readouterr().out
    assert "fejer(pi/2)" in out


def test_cli_exit_codes_follow_check_status(tmp_path):
    cfg = {"k_list": [3], "eps_grid": [1.0, 0.5]}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    # ratio grows but cannot double between eps=1 and eps=1/2: honest failure
    rc = cli_main(["sweep", "--config", str(path), "--out", str(tmp_path / "rep")])
    assert rc == 1
    assert (tmp_path / "rep" / "sweep.json").exists()
    payload = json.loads((tmp_path / "rep" / "sweep.json").read_text())
    statuses = {r["check"]: r["status"] for r in payload["rows"]}
    assert statuses["ratio-doubling"] == "fail"
    assert statuses["ratio-strict-increase"] == "pass"


def test_cli_reads_toml_config(tmp_path):
    path = tmp_path / "cfg.toml"
    path.write_text('suite = "growth"\nseed = 11\n')
    rc = cli_main(["report", "--config", str(path), "--out", str(tmp_path / "rep")])
    assert rc == 0
    assert (tmp_path / "rep" / "growth.json").exists()
    assert not (tmp_path / "rep" / "pp.json").exists()


def test_cli_rejects_unknown_config_key(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text('{"frobnicate": true}')
    rc = cli_main(["norms", "--config", str(path)])
    assert rc == 2
    assert "unknown config keys" in capsys.readouterr().err


def test_cli_rejects_bad_tolerance(capsys):
    rc = cli_main(["norms", "--tol", "0.9"])
    assert rc == 2
    assert "rel_tolerance" in capsys.readouterr().err


def test_cli_missing_config_file(capsys):
    rc = cli_main(["norms", "--config", "/nonexistent/x.toml"])
    assert rc == 2
