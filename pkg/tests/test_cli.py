import io
import json
import shutil
import subprocess
import sys

import pytest

from kuelsh import cli

from conftest import X2


def run(capsys, *argv):
    code = cli.main(["--quiet", *argv])
    out, err = capsys.readouterr()
    report = json.loads(out) if out.strip() else None
    error = json.loads(err)["error"] if err.strip() else None
    return code, report, error


def test_report_schema(capsys):
    code, rep, err = run(capsys, "basis", "--catalog", "Lambda5")
    assert code == 0 and err is None
    assert set(rep) == {"schema", "tool", "version", "command", "input", "result", "timing"}
    assert rep["tool"] == "kuelsh" and rep["command"] == "basis" and rep["schema"] == 1
    assert len(rep["input"]["digest"]) == 64
    assert rep["result"]["dim"] == 14
    assert rep["result"]["cartan"] == [[2, 2, 0], [2, 4, 1], [0, 1, 2]]


@pytest.mark.parametrize(
    "argv",
    [
        ("invariants", "--catalog", "Lambda3p", "--param", "lambda=g+1"),
        ("compare", "--catalog", "Lambda2", "--catalog2", "Lambda2p", "--p", "3"),
        ("hh", "--catalog", "Lambda5", "--degree", "2"),
    ],
)
def test_deterministic_results(capsys, argv):
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a["result"] == b["result"] and a["input"] == b["input"]


def test_catalog_listing(capsys):
    code, rep, _ = run(capsys, "catalog")
    names = [e["name"] for e in rep["result"]["entries"]]
    assert names[:8] == ["Lambda2", "Lambda2p", "Lambda3", "Lambda3p", "Lambda5", "Lambda5p", "Lambda9", "Lambda9p"]
    code, rep, _ = run(capsys, "catalog", "--show", "Lambda5")
    assert code == 0 and "arrow" in json.dumps(rep["result"])


def test_file_and_stdin_inputs(capsys, tmp_path, monkeypatch):
    f = tmp_path / "x2.kq"
    f.write_text(X2)
    code, rep, _ = run(capsys, "validate", str(f))
    assert code == 0
    monkeypatch.setattr(sys, "stdin", io.StringIO(X2))
    code, rep2, _ = run(capsys, "hh", "-", "--degree", "1")
    assert code == 0 and rep2["result"]["dim"] == 2
    monkeypatch.setattr(sys, "stdin", io.StringIO(X2))
    code, rep3, _ = run(capsys, "hh", "-", "--degree", "1", "--method", "bar")
    assert rep3["result"]["dim"] == 2


def test_emit_table(capsys, tmp_path):
    out = tmp_path / "t.json"
    code, rep, _ = run(capsys, "basis", "--catalog", "Lambda2", "--p", "3", "--emit-table", str(out))
    assert code == 0
    data = json.loads(out.read_text())
    assert data["field"]["p"] == 3 and len(data["names"]) == 11
    assert all(len(e) == 4 for e in data["mul"])


def test_invariants_report(capsys):
    code, rep, _ = run(capsys, "invariants", "--catalog", "Lambda5p")
    r = rep["result"]
    assert (r["dim"], r["dimZ"], r["dimK"], r["dimSoc"]) == (14, 5, 9, 3)
    ks = r["kuelshammer"]
    assert ks["codims"] == [2, 0] and ks["dims"] == [5, 3, 3]
    assert ks["socle_to_T1perp"] == 0 and ks["T1perp_to_center"] == 2


def test_form_file(capsys, tmp_path):
    good = tmp_path / "good.form"
    good.write_text("alpha.alpha.alpha.alpha = 1\nbeta.alpha.gamma = 1\n")
    code, rep, _ = run(capsys, "invariants", "--catalog", "Lambda2p", "--p", "3", "--form", str(good))
    assert code == 0 and rep["result"]["dimZ"] == 5
    code, _, err = run(capsys, "invariants", "--catalog", "Lambda2", "--form", str(good))
    assert code == 3 and err["code"] == "NotCentralForm"


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.kq"
    bad.write_text("field 2 1\nvertices 1\narrow x: 1 -> 2\n")
    assert run(capsys, "validate", str(bad))[0] == 2
    assert run(capsys, "validate", "--catalog", "Lambda3", "--p", "2", "--k", "2")[2]["code"] == "MissingParam"
    code, _, err = run(capsys, "validate", "--catalog", "Lambda9", "--p", "3")
    assert (code, err["code"]) == (2, "CharacteristicMismatch")
    code, _, err = run(capsys, "invariants", "--catalog", "Lambda9")
    assert (code, err["code"]) == (3, "NotSymmetricAlgebra")
    assert run(capsys, "hh", "--catalog", "Lambda5", "--degree", "3")[0] == 2
    code, _, err = run(capsys, "compare", "--catalog", "Lambda2", "--p", "3", "--catalog2", "Lambda5")
    assert code == 2


def test_compare_verdicts(capsys):
    _, rep, _ = run(capsys, "compare", "--catalog", "Lambda5", "--catalog2", "Lambda5p")
    r = rep["result"]
    assert r["witness"] == "kuelshammer_codims"
    assert r["verdict"] == "NOT DERIVED EQUIVALENT (witness: kuelshammer_codims)"
    _, rep, _ = run(capsys, "compare", "--catalog", "Lambda9", "--catalog2", "Lambda9p", "--hh")
    assert rep["result"]["witness"] == "hh2_dim"
    _, rep, _ = run(capsys, "compare", "--catalog", "Lambda5", "--catalog2", "Lambda5")
    assert rep["result"]["verdict"] == "INDISTINGUISHABLE BY COMPUTED INVARIANTS"
    assert rep["result"]["agree"]


def test_reproduce(capsys):
    code, rep, _ = run(capsys, "reproduce")
    r = rep["result"]
    assert code == 0 and r["separations"] == "4/4" and r["all_separated"]
    assert r["witness_counts"] == {"hh2": 1, "kuelshammer": 3}
    assert len(r["rows"][1]["pairs"]) == 4  # every (lambda, mu) over F4
    assert r["rows"][3]["values"] == [2, 3]


def test_reproduce_wrong_characteristic(capsys):
    code, rep, err = run(capsys, "reproduce", "--p", "5")
    assert code == 2 and err["code"] == "CharacteristicMismatch"
    assert all(row["status"] == "error" for row in rep["result"]["rows"])


def test_reproduce_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "PAIRS", [("Lambda5", "Lambda5", 2)])
    code, rep, err = run(capsys, "reproduce")
    assert code == 4 and err["code"] == "ReproductionFailure"
    assert rep["result"]["separations"] == "0/1"


@pytest.mark.skipif(shutil.which("kuelsh") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["kuelsh", "--quiet", "hh", "--catalog", "Lambda9p", "--degree", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["dim"] == 3
