"""CLI surface: exit codes, artifacts, determinism, JSON reports."""
import json

import pytest

from hext.cli import EXIT_FAIL, EXIT_NO_BRACKET, EXIT_OK, EXIT_USAGE, main


def _payload(report_text):
    doc = json.loads(report_text)
    doc.pop("wall_time_s", None)
    return doc


def test_certify_ok(tmp_path, capsys):
    out = tmp_path / "cert"
    assert main(["certify", "--m", "1", "--out", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert "all claims pass" in text
    assert "LCplusN" in text and "v2_upper_bound" in text
    rows = json.loads((out / "certificate.json").read_text())
    byid = {r["id"]: r for r in rows}
    assert byid["LCplusN"]["lhs"] == "-33/20"
    assert byid["v2_upper_bound"]["rhs"] == "15/2"
    report = json.loads((out / "report.json").read_text())
    assert report["summary"]["pass"] is True
    assert "wall_time_s" not in report  # artifact reports carry no wall clock


def test_certify_usage_error():
    assert main(["certify", "--m", "2"]) == EXIT_USAGE


def test_missing_required_flag_is_usage_error():
    assert main(["shoot"]) == EXIT_USAGE
    assert main(["alpha", "--n", "3"]) == EXIT_USAGE


def test_alpha_methods_agree_and_deterministic(tmp_path):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    assert main(["alpha", "--n", "3", "--d", "2", "--method", "series", "--out", str(out1)]) == EXIT_OK
    assert main(["alpha", "--n", "3", "--d", "2", "--method", "recursion", "--out", str(out2)]) == EXIT_OK
    csv1 = (out1 / "alpha.csv").read_bytes()
    csv2 = (out2 / "alpha.csv").read_bytes()
    assert csv1 == csv2
    assert csv1.decode() == "q,k,alpha\n0,0,1\n1,0,-1\n1,1,2\n2,0,1\n2,1,0\n2,2,2\n"
    # repeated identical runs are byte-identical, including the report
    out3 = tmp_path / "c"
    assert main(["alpha", "--n", "3", "--d", "2", "--method", "series", "--out", str(out3)]) == EXIT_OK
    assert (out3 / "alpha.csv").read_bytes() == csv1
    assert (out3 / "report.json").read_bytes() != b""
    r1 = json.loads((out1 / "report.json").read_text())
    r3 = json.loads((out3 / "report.json").read_text())
    assert r1 == r3
    assert r1["payload_sha256"] == r3["payload_sha256"]


def test_alpha_cap_respects_env(monkeypatch):
    assert main(["alpha", "--n", "9", "--d", "1"]) == EXIT_USAGE
    monkeypatch.setenv("HEXT_MAX_N", "9")
    assert main(["alpha", "--n", "9", "--d", "1"]) == EXIT_OK


def test_futaki_cli(tmp_path, capsys):
    out = tmp_path / "f"
    assert main(["futaki", "--n", "2", "--d", "1", "--q", "1", "--json", "--out", str(out)]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["outputs"]["value"] == "0/1"
    saved = json.loads((out / "futaki.json").read_text())
    assert saved["value"] == "0/1" and saved["kappa_coefficient"] is True
    assert main(["futaki", "--n", "3", "--d", "2", "--q", "5"]) == EXIT_USAGE


def test_grassmann_cli(capsys):
    assert main(["grassmann", "--k", "2"]) == EXIT_OK
    text = capsys.readouterr().out
    assert text.count("PASS") == 3
    assert main(["grassmann", "--k", "9"]) == EXIT_USAGE


def test_scan_cli(tmp_path, capsys):
    out = tmp_path / "s"
    code = main(
        ["scan", "--m", "1", "--c-min", "2", "--c-max", "7.5", "--steps", "10",
         "--json", "--out", str(out)]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["summary"]["sign_changes"] >= 1
    lines = (out / "scan.csv").read_text().splitlines()
    assert lines[0] == "C,defect,error"
    assert len(lines) == 11
    # beyond the admissible maximum: usage error
    assert main(["scan", "--m", "1", "--c-min", "2", "--c-max", "9", "--steps", "4"]) == EXIT_USAGE


def test_nonexist_cli(capsys):
    assert main(["nonexist", "--m", "1", "--json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["outputs"]["B"] == "-8/3"
    assert doc["outputs"]["C"] == "10/3"
    assert doc["outputs"]["integral_q"] == "0/1"
    assert doc["outputs"]["alt_satisfies_boundary"] is False
    assert doc["outputs"]["margin"] > 0


def test_shoot_cli_artifacts_and_no_bracket(tmp_path, capsys):
    out = tmp_path / "shoot"
    assert main(["shoot", "--m", "1", "--json", "--out", str(out)]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert 2 < doc["outputs"]["c_star"] < 22 / 3
    assert abs(doc["outputs"]["defect"]) < 1e-8
    assert doc["outputs"]["not_hcsck"] is True
    traj_lines = (out / "trajectory.csv").read_text().splitlines()
    assert traj_lines[0] == "gamma,v,phi,phi_prime,lambda"
    first = traj_lines[1].split(",")
    assert first[0] == "1" and first[1] == "2"
    curve_lines = (out / "profile_curve.csv").read_text().splitlines()
    assert curve_lines[0] == "gamma,tau,s,phi"
    # a window on the wrong side of the root has no sign change
    assert main(["shoot", "--m", "1", "--c-min", "7.8", "--c-max", "8.0"]) == EXIT_NO_BRACKET


def test_every_subcommand_honors_json(capsys):
    commands = [
        ["certify", "--m", "1"],
        ["nonexist", "--m", "1"],
        ["scan", "--m", "1", "--c-min", "2", "--c-max", "5", "--steps", "4"],
        ["alpha", "--n", "2", "--d", "1"],
        ["futaki", "--n", "2", "--d", "2", "--q", "1"],
        ["grassmann", "--k", "1"],
    ]
    for argv in commands:
        assert main(argv + ["--json"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)  # stdout is the report alone
        assert {"command", "parameters", "outputs", "summary", "payload_sha256", "wall_time_s"} <= set(doc)
        assert doc["command"] == argv[0]


def test_shoot_m3_never_crashes():
    # beyond the certified window the command must still exit 0 or 2
    assert main(["shoot", "--m", "3"]) in (EXIT_OK, EXIT_NO_BRACKET)


def test_json_payload_deterministic(capsys):
    assert main(["futaki", "--n", "3", "--d", "3", "--q", "2", "--json"]) == EXIT_OK
    first = _payload(capsys.readouterr().out)
    assert main(["futaki", "--n", "3", "--d", "3", "--q", "2", "--json"]) == EXIT_OK
    second = _payload(capsys.readouterr().out)
    assert first == second
    assert first["payload_sha256"] == second["payload_sha256"]
