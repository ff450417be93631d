"""CLI: config resolution, spec wire format, serialization, commands, exit codes."""

import json

import numpy as np
import pytest

from mfgl import cli
from mfgl.hamiltonians import CurieWeissSpec, IsingSpec, LinearSpec, SmoothedCutoffSpec
from mfgl.verify import make_row


# ---------------------------------------------------------------------------
# Config and environment
# ---------------------------------------------------------------------------


def test_config_defaults_and_flags():
    cfg = cli.build_config(["analyze", "--spec", "x.json", "--seed", "5"], env={})
    assert cfg.command == "analyze" and cfg.seed == 5
    assert cfg.samples == 100_000 and cfg.fmt == "json"


def test_env_overrides_and_flag_precedence():
    env = {"MFGL_SEED": "9", "MFGL_SAMPLES": "321", "MFGL_FORMAT": "csv"}
    cfg = cli.build_config(["audit", "--seed", "4"], env=env)
    assert cfg.seed == 4            # flag wins
    assert cfg.samples == 321       # env fills the gap
    assert cfg.fmt == "csv"


def test_config_validation_errors():
    with pytest.raises(cli.InputError):
        cli.build_config(["audit", "--suite", "appendix", "--tol", "-1"], env={})
    with pytest.raises(cli.InputError):
        cli.build_config(["audit"], env={"MFGL_SEED": "not-a-number"})


def test_lambda_grid_parsing():
    cfg = cli.build_config(["ld-scan", "--lambda-grid", "0.5:2:3"], env={})
    grid = cfg.parsed_lambda_grid()
    assert grid.size == 7 and 0.0 in grid
    cfg.lambda_grid = "oops"
    with pytest.raises(cli.InputError):
        cfg.parsed_lambda_grid()


# ---------------------------------------------------------------------------
# Spec wire format
# ---------------------------------------------------------------------------


def test_spec_round_trip_all_types():
    from mfgl.hamiltonians import SparseFourierSpec, TriangleCountSpec

    specs = [
        LinearSpec((0.1, -0.2)),
        IsingSpec(((0.0, 0.5), (0.5, 0.0)), (0.1, -0.1)),
        CurieWeissSpec(1.5, 6),
        TriangleCountSpec(0.8, 5),
        SparseFourierSpec(4, (((0, 2), 1.5), ((1,), -0.5))),
        SmoothedCutoffSpec(CurieWeissSpec(1.2, 5), 0.4, 0.05),
    ]
    for spec in specs:
        assert cli.spec_from_dict(cli.spec_to_dict(spec)) == spec


def test_spec_from_dict_rejects_malformed():
    with pytest.raises(cli.InputError):
        cli.spec_from_dict({"no_type": 1})
    with pytest.raises(cli.InputError):
        cli.spec_from_dict({"type": "weird"})
    with pytest.raises(cli.InputError):
        cli.spec_from_dict({"type": "ising", "coupling": [[0, 1], [2, 0]], "field": [0, 0]})


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def test_serialize_empty_report_valid():
    report = {"config": {}, "params": None, "solutions": [], "audits": [], "timings": {}}
    data = cli.serialize_report(report, "json")
    assert cli.parse_report(data) == report
    csv_data = cli.serialize_report(report, "csv").decode()
    assert csv_data.splitlines()[0].startswith("check_id")
    assert len(csv_data.splitlines()) == 1


def test_json_round_trip_with_floats_and_none():
    rows = [make_row("a", {"x": 1}, 1.0 / 3.0, 2.0),
            make_row("b", {}, 1.0, 0.0)]  # flagged ratio -> null
    report = {"config": {"seed": 0}, "params": None,
              "solutions": [], "audits": cli._row_dicts(rows), "timings": {}}
    data = cli.serialize_report(report, "json")
    assert cli.parse_report(data) == report
    assert b"0.33333333333333331" in data  # 17 significant digits


def test_csv_row_count_matches_json():
    rows = [make_row(f"r{k}", {"k": k}, float(k), 10.0) for k in range(7)]
    report = {"config": {}, "params": None, "solutions": [],
              "audits": cli._row_dicts(rows), "timings": {}}
    json_rows = cli.parse_report(cli.serialize_report(report, "json"))["audits"]
    csv_lines = cli.serialize_report(report, "csv").decode().splitlines()
    assert len(csv_lines) - 1 == len(json_rows) == 7


def test_atomic_write(tmp_path):
    target = tmp_path / "sub" / "out.json"
    cli.write_atomic(str(target), b"{}\n")
    assert target.read_bytes() == b"{}\n"
    leftovers = [p for p in target.parent.iterdir() if p.suffix == ".tmp"]
    assert not leftovers


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _write_spec(tmp_path, payload, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_analyze_curie_weiss(tmp_path):
    spec = _write_spec(tmp_path, {"type": "curie_weiss", "beta": 2.0, "n": 6})
    out = tmp_path / "report.json"
    code = cli.main(["analyze", "--spec", spec, "--out", str(out),
                     "--seed", "3", "--samples", "2000"])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["params"]["l1"] >= 1.0
    assert report["scalar_roots"][2] == pytest.approx(0.9575, abs=1e-4)
    assert any(s["converged"] for s in report["solutions"])
    assert all("structural_set" in s for s in report["solutions"] if s["converged"])
    assert report["config"]["hamiltonian"]["type"] == "curie_weiss"


def test_analyze_ising_reports_closed_form_bounds(tmp_path):
    a = [[0.0, 0.3, 0.0], [0.3, 0.0, -0.2], [0.0, -0.2, 0.0]]
    spec = _write_spec(tmp_path, {"type": "ising", "coupling": a, "field": [0.1, 0.0, -0.1]})
    out = tmp_path / "ising.json"
    code = cli.main(["analyze", "--spec", spec, "--out", str(out),
                     "--seed", "2", "--samples", "5000"])
    assert code == 0
    report = json.loads(out.read_text())
    bounds = report["closed_form_bounds"]
    assert bounds["d_provenance"] == "closed_form_bound"
    # the Monte-Carlo width sits below the closed form (allowing 3 sigma)
    assert report["params"]["d"] <= bounds["d"] + 3 * report["params"]["d_stderr"]
    assert report["params"]["l1"] <= bounds["l1"] + 1e-12
    assert report["params"]["l2"] <= bounds["l2"] + 1e-12


def test_fixed_points_command(tmp_path):
    spec = _write_spec(tmp_path, {"type": "curie_weiss", "beta": 0.5, "n": 5})
    out = tmp_path / "fp.json"
    assert cli.main(["fixed-points", "--spec", spec, "--out", str(out), "--seed", "1"]) == 0
    report = json.loads(out.read_text())
    best = report["solutions"][0]
    assert best["converged"] and abs(sum(best["point"])) < 1e-6


def test_ld_scan_with_witness(tmp_path):
    spec = _write_spec(tmp_path, {"type": "curie_weiss", "beta": 1.5, "n": 8})
    out = tmp_path / "ld.json"
    code = cli.main(["ld-scan", "--spec", spec, "--out", str(out), "--t", "0.5",
                     "--delta", "0.05", "--lambda-grid", "0.2:2:6", "--seed", "2"])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["cutoff"]["delta_prime"] == pytest.approx((np.log(4) + 1) / 2 * 0.05)
    assert report["cutoff"]["delta_prime_within_two_delta"] is True
    ids = [r["check_id"] for r in report["audits"]]
    assert "cutoff_tail_mass" in ids and "cutoff_total_variation" in ids


def test_ld_scan_witness_missing_exits_one(tmp_path, capsys):
    spec = _write_spec(tmp_path, {"type": "linear", "theta": [0.1, 0.2, -0.3]})
    out = tmp_path / "ld.json"
    code = cli.main(["ld-scan", "--spec", spec, "--out", str(out), "--t", "5.0",
                     "--delta", "0.05"])
    assert code == 1
    assert "witness-missing" in capsys.readouterr().err
    report = json.loads(out.read_text())
    assert report["audits"][0]["check_id"] == "witness_missing"


def test_ld_scan_requires_t_and_delta(tmp_path):
    spec = _write_spec(tmp_path, {"type": "curie_weiss", "beta": 1.5, "n": 6})
    assert cli.main(["ld-scan", "--spec", spec]) == 1


def test_audit_appendix_suite_passes(tmp_path):
    out = tmp_path / "audit.json"
    code = cli.main(["audit", "--suite", "appendix", "--out", str(out), "--seed", "4"])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["summary"]["failures"] == 0
    assert report["summary"]["rows"] == len(report["audits"])


def test_audit_failure_exits_two(tmp_path, monkeypatch):
    bad = make_row("forced_failure", {}, 2.0, 1.0)
    monkeypatch.setattr(cli, "audit_tanh_mean_swap", lambda *a, **k: bad)
    out = tmp_path / "audit.json"
    code = cli.main(["audit", "--suite", "appendix", "--out", str(out), "--seed", "4"])
    assert code == 2
    report = json.loads(out.read_text())
    assert report["summary"]["failures"] >= 1


def test_report_command_csv_projection(tmp_path):
    out = tmp_path / "audit.json"
    assert cli.main(["audit", "--suite", "tightness", "--out", str(out), "--seed", "0"]) == 0
    csv_out = tmp_path / "audit.csv"
    assert cli.main(["report", "--spec", str(out), "--format", "csv",
                     "--out", str(csv_out)]) == 0
    lines = csv_out.read_text().splitlines()
    report = json.loads(out.read_text())
    assert len(lines) - 1 == len(report["audits"])


def test_missing_spec_is_input_error():
    assert cli.main(["analyze"]) == 1
    assert cli.main(["analyze", "--spec", "/nonexistent/path.json"]) == 1


def test_bad_usage_exits_one():
    assert cli.main(["not-a-command"]) == 1


def test_timings_off_by_default(tmp_path):
    spec = _write_spec(tmp_path, {"type": "curie_weiss", "beta": 0.5, "n": 4})
    out = tmp_path / "r.json"
    cli.main(["analyze", "--spec", spec, "--out", str(out), "--samples", "500"])
    assert json.loads(out.read_text())["timings"] == {}
    cli.main(["analyze", "--spec", spec, "--out", str(out), "--samples", "500", "--timings"])
    assert "complexity" in json.loads(out.read_text())["timings"]
