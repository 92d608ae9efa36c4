import csv
import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from sfqec import cli, sweep

FAST = ["--points", "3", "--states", "SF,alpha_perp_1.0", "--no-gate"]


def run(*args):
    return cli.main(list(args))


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_codewords(capsys):
    assert run("codewords") == 0
    out = capsys.readouterr().out
    assert "0.573108" in out
    assert "<n> = 3.830" in out
    for r in ("-1.409", "-1.358", "1.396", "1.291"):
        assert r in out
    assert "all values match" in out


def test_commute_check(capsys):
    assert run("commute-check") == 0
    assert "pass" in capsys.readouterr().out
    assert run("commute-check", "--gamma1", "0") == 0
    line = capsys.readouterr().out.splitlines()[1]
    assert float(line.split()[2].rstrip(";")) < 1e-14


def test_commute_check_under_truncated(capsys):
    assert run("commute-check", "--J", "1") == cli.EXIT_GATE
    out = capsys.readouterr().out
    assert "not converged" in out
    assert float(out.splitlines()[1].split()[2].rstrip(";")) > 1e-8


def test_sweep_csv_schema_and_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("sweep", "--measure", "kl,petz", "--out", str(a), *FAST) == 0
    assert run("sweep", "--measure", "kl,petz", "--out", str(b), "--workers", "3", *FAST) == 0
    fa = (a / "loss_kl_petz.csv").read_bytes()
    assert fa == (b / "loss_kl_petz.csv").read_bytes()
    rows = read_rows(a / "loss_kl_petz.csv")
    assert list(rows[0]) == ["gamma", "state", "measure", "value"]
    assert len(rows) == 3 * 2 * 2
    keys = [(r["measure"], r["state"], float(r["gamma"])) for r in rows]
    assert keys == sorted(keys)
    assert all(math.isfinite(float(r["value"])) for r in rows)
    # 17 significant digits round-trip
    assert float(rows[0]["gamma"]) == pytest.approx(1e-7, rel=1e-15)


def test_sweep_all_formats(tmp_path):
    out = tmp_path / "o"
    code = run("sweep", "--error", "dephasing", "--measure", "kl,petz,opt", "--format", "csv,json,svg", "--out", str(out), *FAST)
    assert code == 0
    summary = json.loads((out / "dephasing_kl_petz_opt.json").read_text())
    assert set(summary["measures"]) == {"kl", "petz", "opt"}
    meta = summary["metadata"]
    assert meta["dim"] == 240 and meta["points"] == 3 and "max_tp_residual" in meta
    assert meta["tool_version"]
    ordering = summary["measures"]["kl"]["ordering"]
    assert ordering["lowest_at_each_point"] == ["alpha_perp_1.0"] * 3
    for m in ("kl", "petz", "opt"):
        root = ET.parse(out / f"dephasing_kl_petz_opt_{m}.svg").getroot()
        assert root.tag.endswith("svg")
        assert len(root.findall("{http://www.w3.org/2000/svg}polyline")) == 2


def test_sweep_zero_rate_with_force(tmp_path):
    out = tmp_path / "z"
    code = run("sweep", "--gamma-min", "0", "--gamma-max", "0", "--points", "1", "--force",
               "--measure", "kl,petz", "--out", str(out), "--no-gate")
    assert code == 0
    for r in read_rows(out / "loss_kl_petz.csv"):
        expect = 0.0 if r["measure"] == "kl" else 1.0
        assert float(r["value"]) == pytest.approx(expect, abs=1e-12)


def test_sweep_convergence_gate_recorded(tmp_path):
    out = tmp_path / "g"
    assert run("sweep", "--points", "2", "--states", "alpha_par_0.5", "--measure", "kl", "--format", "json",
               "--out", str(out)) == 0
    gate = json.loads((out / "loss_kl.json").read_text())["metadata"]["convergence_gate"]
    assert gate["dim"] == 360 and gate["passed"]


def test_sweep_truncation_and_gate_exit_codes(tmp_path, monkeypatch):
    # the squeezed Fock code is fine at 120 levels; the parallel cats are not
    assert run("sweep", "--dim", "120", "--points", "1", "--states", "SF", "--measure", "kl",
               "--out", str(tmp_path)) == 0
    assert run("sweep", "--dim", "120", "--points", "1", "--states", "alpha_par_0.5", "--measure", "kl",
               "--out", str(tmp_path)) == cli.EXIT_VALIDATION
    monkeypatch.setattr(sweep, "GATE_TOL", 0.0)
    assert run("sweep", "--points", "1", "--states", "alpha_par_0.5", "--measure", "kl",
               "--out", str(tmp_path)) == cli.EXIT_GATE


@pytest.mark.parametrize("args", [
    ["--gamma-max", "0.05"],
    ["--error", "dephasing", "--gamma-max", "0.005"],
    ["--gamma-min", "0"],
    ["--measure", "fidelity"],
    ["--format", "png"],
    ["--states", "GKP"],
    ["--points", "0"],
    ["--gamma-min", "1e-3", "--gamma-max", "1e-4"],
])
def test_sweep_validation_errors(tmp_path, args):
    assert run("sweep", "--out", str(tmp_path), "--no-gate", *args) == cli.EXIT_VALIDATION


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"error": "dephasing", "measures": ["kl"], "points": 2, "states": "SF",
                               "output_dir": str(tmp_path / "from_file"), "gate": False}))
    assert run("sweep", "--config", str(cfg)) == 0
    assert len(read_rows(tmp_path / "from_file" / "dephasing_kl.csv")) == 2
    assert run("sweep", "--config", str(cfg), "--points", "4", "--out", str(tmp_path / "flag")) == 0
    assert len(read_rows(tmp_path / "flag" / "dephasing_kl.csv")) == 4
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert run("sweep", "--config", str(bad)) == cli.EXIT_VALIDATION
    assert run("sweep", "--config", str(tmp_path / "missing.json")) == cli.EXIT_VALIDATION


def test_sweep_config_defaults():
    cfg = sweep.SweepConfig(error="dephasing").validate()
    assert (cfg.gamma_min, cfg.gamma_max, cfg.points) == (1e-7, 1e-3, 25)
    g = cfg.grid()
    assert g[0] == pytest.approx(1e-7) and g[-1] == pytest.approx(1e-3)
    assert all(b / a == pytest.approx(g[1] / g[0]) for a, b in zip(g, g[1:]))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sfqec", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "0.1.0" in proc.stdout


def test_solver_failure_is_recorded(tmp_path, monkeypatch, capsys):
    from sfqec.errors import SolverFailureError

    def broken(code, K, *args, **kwargs):
        raise SolverFailureError("forced", {})

    monkeypatch.setattr(sweep.optimal, "optimal_recovery", broken)
    code = run("sweep", "--measure", "opt", "--points", "2", "--states", "SF", "--no-gate", "--out", str(tmp_path))
    assert code == cli.EXIT_SOLVER
    assert capsys.readouterr().err.count("FAILED SF") == 2
