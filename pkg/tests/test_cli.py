import json

import pytest

from ectkit.cli import RunConfig, UsageError, main
from ectkit.fileio import read_curves

TRIANGLE = "OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n"


@pytest.fixture
def mesh(tmp_path):
    p = tmp_path / "tri.off"
    p.write_text(TRIANGLE)
    return p


def test_ect_sect_invert_round_trip(tmp_path, mesh):
    assert main(["ect", str(mesh), "--out", str(tmp_path / "a")]) == 0
    assert main(["sect", str(tmp_path / "a" / "ect.json"), "--out", str(tmp_path / "b")]) == 0
    assert main(["invert", str(tmp_path / "b" / "sect.json"), "--out", str(tmp_path / "c")]) == 0
    original = read_curves(tmp_path / "a" / "ect.json")
    recovered = read_curves(tmp_path / "c" / "ect.json")
    assert recovered.curves == original.curves
    assert recovered.directions == original.directions
    cfg = json.loads((tmp_path / "a" / "run_config.json").read_text())
    assert cfg["command"] == "ect" and cfg["directions"] == "axes"


def test_exit_codes(tmp_path, mesh, capsys):
    assert main(["ect", str(tmp_path / "missing.off")]) == 1
    assert main(["ect", str(mesh), "--bogus"]) == 1
    assert "usage" in capsys.readouterr().err
    assert main(["frobnicate"]) == 1
    assert main(["ect", str(mesh), "--workers", "0"]) == 1
    assert main(["ect", str(mesh), "--directions", "0,0", "--out", str(tmp_path)]) == 1


def test_image_commands(tmp_path):
    img = tmp_path / "two.pgm"
    img.write_text("P2\n2 1\n3\n1 3\n")
    out = str(tmp_path / "o")
    assert main(["ert", str(img), "--out", out, "--formats", "json,csv"]) == 0
    assert (tmp_path / "o" / "ert.csv").exists()
    assert main(["sert", str(img), "--out", out, "--window", "5"]) == 0
    b = read_curves(tmp_path / "o" / "sert.json")
    assert b.metadata["window"] == "5"
    assert main(["ect", str(img), "--out", out]) == 1  # rational values
    assert main(["select", str(img), "--level", "1/2", "--out", out]) == 0
    assert main(["lect", str(img), "--out", out]) == 1  # --level missing
    assert main(["betti", str(img), "--k", "0", "--out", out]) == 0
    assert main(["plot", str(tmp_path / "o" / "ert.json"), "--out", str(tmp_path / "svg")]) == 0
    assert len(list((tmp_path / "svg").glob("*.svg"))) == 4


def test_workers_do_not_change_outputs(tmp_path, mesh):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["ect", str(mesh), "--directions", "rational_grid", "--count", "6"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b), "--workers", "3"]) == 0
    assert (a / "ect.json").read_bytes() == (b / "ect.json").read_bytes()


def test_explicit_directions(tmp_path, mesh):
    assert main(["ect", str(mesh), "--directions", "1,1,0;0,0,1", "--out", str(tmp_path)]) == 0
    b = read_curves(tmp_path / "ect.json")
    assert len(b.directions) == 2


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig("ect", input="x.off", window="-1")
    with pytest.raises(UsageError):
        RunConfig("ect", input="x.off", formats=["xml"])
    cfg = RunConfig("verify")
    assert json.loads(cfg.to_json())["workers"] == 1


def test_verify_reports_audit_failure(tmp_path, monkeypatch):
    from ectkit import battery

    failing = {"seed": 0, "reports": [{"tag": "x", "subject": "", "passed": False, "cases": 1,
                                       "failures": [{"t": "0/1"}], "notes": {}, "job": "x"}],
               "summary": {"reports": 1, "failed": 1, "cases": 1, "passed": False}}
    monkeypatch.setattr(battery, "run_battery", lambda seed, workers: failing)
    assert main(["verify", "--out", str(tmp_path)]) == 2
    assert "FAIL x" in (tmp_path / "verify_report.txt").read_text()
