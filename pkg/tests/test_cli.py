import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyverlinde import make
from cyverlinde.category import to_dict
from cyverlinde.cli import main
from cyverlinde.dsl import evaluate, matrix_from_csv, matrix_from_json

PHI = (1 + math.sqrt(5)) / 2


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_list():
    code, out, _ = run("list")
    assert code == 0
    assert out.split() == ["trivial", "fibonacci", "ising", "semion", "rep_z2", "cyclic", "su2"]
    code, out, _ = run("list", "--format", "json")
    assert json.loads(out)["builtins"][1] == "fibonacci"


def test_verlinde_json():
    code, out, _ = run("verlinde", "fibonacci", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["verlinde"] == "pass" and doc["reverse"] == "pass"
    assert doc["max_residual"] < 1e-9


def test_genus_text():
    code, out, _ = run("genus", "fibonacci", "-g", "2")
    assert code == 0
    assert out.strip() == "formula 5.000000, bruteforce 5, pass"


def test_genus_insertions_json():
    code, out, _ = run("genus", "ising", "-g", "1", "-i", "psi", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["bruteforce"] == 1 and doc["insertions"] == ["psi"]
    assert doc["formula"] == pytest.approx(1)


def test_labels_resolve_by_name_first():
    code, out, _ = run("genus", "fibonacci", "-g", "0", "-i", "1", "--format", "json")
    assert json.loads(out)["bruteforce"] == 1


def test_eval_text_six_digits():
    code, out, _ = run("eval", "fibonacci", "Psi . Psi")
    assert code == 0
    rows = [line.split() for line in out.strip().splitlines()]
    assert rows == [["3.61803", "0"], ["0", "3.61803"]]


@pytest.mark.parametrize("expr", ["Psi . Psi", "coY2 . Y1", "Y1 . (PsiBar # K)", "ci1 . Psi"])
@pytest.mark.parametrize("fmt,reader", [("json", matrix_from_json), ("csv", matrix_from_csv)])
def test_eval_export_roundtrips(expr, fmt, reader):
    cat = make("ising")
    code, out, _ = run("eval", "ising", expr, "--format", fmt)
    assert code == 0
    again = reader(out)
    assert again.tobytes() == evaluate(expr, cat).matrix.tobytes()


def test_eval_apply():
    code, out, _ = run("eval", "fibonacci", "Y2", "--apply", "tau,tau", "--format", "json")
    assert code == 0
    assert np.allclose(matrix_from_json(out), [[1], [1]])


@pytest.mark.parametrize("expr,pos", [("Y1 .", 4), ("Y1 . Psi", 3), ("Y1 $", 3)])
def test_eval_errors_echo_position(expr, pos):
    code, out, err = run("eval", "fibonacci", expr)
    assert code == 2 and out == ""
    assert f"position {pos}" in err
    assert err.rstrip().endswith("^")


def test_props():
    code, out, _ = run("props", "semion", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "pass"
    assert len(doc["checks"]) == 29
    code, out, _ = run("props", "rep_z2")
    assert code == 1
    assert "counit_discrepancy" in out and "fail" in out


def test_validate_builtin_includes_fr():
    code, out, _ = run("validate", "ising", "--format", "csv")
    assert code == 0
    assert "fr_pentagon,pass" in out


def test_validate_json_file(tmp_path):
    doc = to_dict(make("fibonacci"))
    good = tmp_path / "fib.json"
    good.write_text(json.dumps(doc))
    assert run("validate", str(good))[0] == 0
    assert run("verlinde", str(good))[0] == 0
    doc["N"][1][1][1] = 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run("validate", str(bad))
    assert code == 1 and "dimension_equation" in out
    assert run("verlinde", str(bad))[0] == 2


def test_handlebody_without_fr_tables(tmp_path):
    doc = to_dict(make("fibonacci"))
    doc["name"] = "mystery"
    path = tmp_path / "mystery.json"
    path.write_text(json.dumps(doc))
    code, _, err = run("handlebody", str(path), "-g", "1")
    assert code == 2 and "no F/R data" in err


def test_handlebody():
    code, out, _ = run("handlebody", "fibonacci", "-g", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "pass" and doc["basis_size"] == 5


@pytest.mark.parametrize("argv", [
    [],
    ["verlinde"],
    ["frobnicate", "fibonacci"],
    ["verlinde", "nope"],
    ["verlinde", "fibonacci", "--format", "xml"],
    ["verlinde", "fibonacci", "--tolerance", "-1"],
    ["genus", "fibonacci"],
    ["genus", "fibonacci", "-g", "1", "-i", "sigma"],
    ["handlebody", "fibonacci", "-g", "0"],
    ["verlinde", "/nonexistent/cat.json"],
])
def test_usage_errors(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert err.startswith("error:")


def test_tolerance_environment(monkeypatch):
    monkeypatch.setenv("MTC_TOLERANCE", "1e-30")
    code, out, _ = run("verlinde", "ising", "--format", "json")
    assert code == 1 and json.loads(out)["verlinde"] == "fail"
    assert run("verlinde", "ising", "--tolerance", "1e-9")[0] == 0
    monkeypatch.setenv("MTC_TOLERANCE", "abc")
    assert run("verlinde", "ising")[0] == 2


CHECKS = ["verlinde", "props", "validate"]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["trivial", "fibonacci", "ising", "semion", "rep_z2", "cyclic(3,2)"]),
       st.sampled_from(CHECKS), st.sampled_from([1e-30, 1e-9]))
def test_exit_code_contract(name, command, tol):
    code, out, _ = run(command, name, "--tolerance", repr(tol), "--format", "json")
    doc = json.loads(out)
    statuses = [doc["verlinde"], doc["reverse"]] if command == "verlinde" else [doc["status"]]
    assert code == (0 if all(s == "pass" for s in statuses) else 1)


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "cyverlinde.cli", "genus", "fibonacci", "-g", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "bruteforce 5" in proc.stdout
