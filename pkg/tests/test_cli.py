"""CLI behaviour: golden reports, exit codes and configuration merging.

Golden files are regenerated with ``CADLAG_QV_UPDATE_GOLDEN=1 pytest tests/test_cli.py``.
"""

import csv
import json
import os
from pathlib import Path

import pytest

from cadlag_qv.cli import main

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"
T0 = "0.7071067811865476"

CASES = {
    "qv_compute_q": ["qv", "compute", "--path", "remark.csv", "--levels", "4..10", "--t", T0, "--mode", "q"],
    "qv_compute_p": ["qv", "compute", "--path", "remark.csv", "--levels", "4..10", "--t", T0, "--mode", "p"],
    "qv_compute_s_uniform": ["qv", "compute", "--path", "two_jump.csv", "--scheme", "uniform",
                             "--levels", "3..6", "--t", "0.8", "--mode", "s"],
    "qv_limit": ["qv", "limit", "--path", "remark.csv", "--levels", "6..10", "--tol", "0.1"],
    "qv_matrix": ["qv", "matrix", "--path", "pair.csv", "--levels", "6..10", "--tol", "0.1"],
    "dist": ["dist", "--x", "a03.csv", "--y", "a04.csv", "--oracle", "--halfline"],
    "ito": ["ito", "--path", "two_jump.csv", "--f", "poly:0,0,0,1", "--levels", "3..6"],
    "mc_cauchy": ["mc", "run", "--model", "poisson:lambda=2,jump=1", "--paths", "20", "--seed", "4",
                  "--levels", "8..12", "--eps", "0.05"],
}


def run(args, tmp_path):
    out = tmp_path / "report.json"
    args = [str(DATA / a) if a.endswith((".csv", ".txt")) and ":" not in a else a for a in args]
    code = main(args + ["--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, tmp_path):
    code, report = run(CASES[name], tmp_path)
    assert code == 0
    assert report["schema"] == 1
    golden = GOLDEN / f"{name}.json"
    if os.environ.get("CADLAG_QV_UPDATE_GOLDEN"):
        golden.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    assert report == json.loads(golden.read_text())


def test_remark_values(tmp_path, capsys):
    assert run(CASES["qv_compute_q"], tmp_path)[1]["values"] == [1.0] * 7
    assert run(CASES["qv_compute_p"], tmp_path)[1]["values"] == [0.0] * 7
    lines = capsys.readouterr().out.split("\n")
    assert "4 1" in lines and "4 0" in lines


def test_dist_values(tmp_path):
    report = run(CASES["dist"], tmp_path)[1]
    assert report["distance"] == pytest.approx(0.1)
    assert report["uniform_distance"] == 1.0
    assert report["halfline_distance"] == pytest.approx(0.05)


def test_limit_plot(tmp_path):
    plot = tmp_path / "plot.csv"
    code, report = run(CASES["qv_limit"] + ["--plot", str(plot), "--t", T0], tmp_path)
    assert code == 0 and report["mode"] == "j1"
    rows = list(csv.reader(plot.open()))
    assert rows[0] == ["level", "j1_distance", "uniform_distance", "value_at_t"]
    assert [float(r[3]) for r in rows[1:]] == [1.0] * 5
    assert [float(r[2]) for r in rows[1:-1]] == [1.0] * 4


def test_explicit_scheme_file(tmp_path):
    code, report = run(["qv", "compute", "--path", "two_jump.csv", "--scheme", f"file:{DATA / 'parts.txt'}",
                        "--levels", "0..2", "--t", "1"], tmp_path)
    assert code == 0
    assert report["values"] == [5.0, 5.0, 5.0]


@pytest.mark.parametrize("args, code", [
    (["qv", "compute", "--path", "remark.csv", "--levels", "5..4"], 2),
    (["qv", "compute", "--path", "remark.csv"], 2),
    (["qv", "limit", "--path", "remark.csv", "--levels", "4..8", "--tol", "-1"], 2),
    (["qv", "compute", "--path", "missing.csv", "--levels", "4..5"], 3),
    (["qv", "compute", "--path", "parts.txt", "--levels", "4..5"], 3),
    (["qv", "compute", "--path", "remark.csv", "--levels", "4..5", "--scheme", "halton"], 2),
    (["qv", "compute", "--path", "remark.csv", "--levels", "4..5", "--scheme", "file:nope.txt"], 3),
    (["ito", "--path", "remark.csv", "--f", "exp", "--levels", "4..5"], 2),
    (["mc", "run", "--model", "brownian", "--levels", "4..6"], 2),
    (["mc", "run", "--model", "levy", "--seed", "1", "--levels", "4..6"], 2),
    (["dist", "--x", "a03.csv", "--y", "a04.csv", "--horizon", "2"], 2),
])
def test_exit_codes(args, code, tmp_path):
    assert run(args, tmp_path)[0] == code


def test_strict_non_convergence(tmp_path):
    args = ["mc", "run", "--model", "white_noise", "--paths", "5", "--seed", "1",
            "--levels", "4..7", "--resolution", "9"]
    assert run(args, tmp_path)[0] == 0
    assert run(args + ["--strict"], tmp_path)[0] == 1
    assert run(["qv", "limit", "--path", "remark.csv", "--levels", "4..6", "--strict"], tmp_path)[0] == 1


def test_config_merging(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"path": str(DATA / "remark.csv"), "levels": "4..6", "t": 0.5, "mode": "p"}))
    code, report = run(["qv", "compute", "--config", str(cfg)], tmp_path)
    assert code == 0 and report["t"] == 0.5 and report["mode"] == "p" and report["levels"] == [4, 5, 6]
    code, report = run(["qv", "compute", "--config", str(cfg), "--mode", "q", "--t", "1"], tmp_path)
    assert report["mode"] == "q" and report["values"] == [1.0] * 3
    cfg.write_text("[1, 2]")
    assert run(["qv", "compute", "--config", str(cfg)], tmp_path)[0] == 2
    cfg.write_text("{not json")
    assert run(["qv", "compute", "--config", str(cfg)], tmp_path)[0] == 2


def test_mc_seed_reproducible(tmp_path):
    args = ["mc", "run", "--model", "brownian:sigma=1", "--paths", "10", "--seed", "3",
            "--levels", "5..8", "--test", "ucp"]
    assert run(args, tmp_path)[1] == run(args, tmp_path)[1]
