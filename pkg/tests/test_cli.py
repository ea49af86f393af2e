import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from exlp.cli import run


@pytest.fixture
def ex1(tmp_path, example1_text):
    p = tmp_path / "example1.lp"
    p.write_text(example1_text)
    return p


@pytest.fixture
def tiny_file(tmp_path):
    p = tmp_path / "tiny.lp"
    p.write_text("min: x\nst\n 3 x = 1\n")
    return p


def test_fac_text(tiny_file, capsys):
    assert run(["solve", str(tiny_file), "--mode", "fac"]) == 0
    out = capsys.readouterr().out
    assert "status: optimal" in out and "objective: 1/3" in out


def test_rec_json(ex1, capsys):
    assert run(["solve", str(ex1), "--mode", "rec", "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["status"] == "optimal" and rep["objective"] == "8"
    assert all(F(v).denominator <= 8 for v in rep["x"].values())
    assert set(rep["x"]) == {f"x{i}" for i in range(1, 7)}


def test_refine_tau(tiny_file, capsys):
    assert run(["solve", str(tiny_file), "--mode", "refine", "--tau", "1e-20", "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["status"] == "converged"
    assert F(rep["final_delta"]) <= F(1, 10**20)
    assert abs(F(rep["x"]["x"]) - F(1, 3)) <= F(1, 10**20)


def test_exit_codes(tmp_path, ex1, capsys):
    bad = tmp_path / "bad.lp"
    bad.write_text("min: x +\n")
    assert run(["solve", str(bad)]) == 3
    assert run(["solve", str(tmp_path / "missing.lp")]) == 3
    infeasible = tmp_path / "inf.lp"
    infeasible.write_text("min: x\nst\n x <= -1\n")
    assert run(["solve", str(infeasible)]) == 2
    assert run(["solve", str(ex1), "--mode", "refine", "--max-rounds", "1"]) == 4
    assert run(["solve"]) == 1
    with pytest.raises(SystemExit) as err:
        run(["solve", str(ex1), "--mode", "nope"])
    assert err.value.code == 1


def test_seed_passthrough(capsys):
    assert run(["solve", "--seed", "7", "--format", "json"]) == 0
    first = json.loads(capsys.readouterr().out)
    assert run(["solve", "--seed", "7", "--format", "json"]) == 0
    second = json.loads(capsys.readouterr().out)
    for key in ("factorization_time", "reconstruction_time"):
        first.pop(key), second.pop(key)
    assert first == second


def test_mps_input(tmp_path, capsys):
    p = tmp_path / "t.mps"
    p.write_text(
        "NAME T\nROWS\n N COST\n G R1\nCOLUMNS\n    X COST 1 R1 3\nRHS\n    RHS R1 1\nENDATA\n"
    )
    assert run(["solve", str(p), "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["objective"] == "1/3"


def test_console_module(tiny_file):
    proc = subprocess.run([sys.executable, "-m", "exlp.cli", "solve", str(tiny_file)], capture_output=True, text=True)
    assert proc.returncode == 0 and "1/3" in proc.stdout
