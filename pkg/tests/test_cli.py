import dataclasses
import json
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

import uqglmn.rmatrix as rmatrix
from uqglmn.cli import SUITES, ConfigError, RunConfig, emit, main, run, sample_values
from uqglmn.graded_tensor import GradedMatrix
from uqglmn.report import Status, VerificationOutcome, VerificationReport


def verify(capsysbinary, *args):
    code = main(["verify", *args])
    out = capsysbinary.readouterr().out
    return code, out


def test_ybe_passes(capsysbinary):
    code, out = verify(capsysbinary, "ybe", "--m", "1", "--n", "1")
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"config", "checks", "summary"}
    assert doc["summary"] == {"pass": 4, "fail": 0, "mismatch": 0, "skipped": 0}
    assert [c["relation"] for c in doc["checks"]] == [
        "ybe.component-signs", "ybe.graded-embedding", "ybe.theta-operator", "ybe.tilde-plain"]
    for c in doc["checks"]:
        assert set(c) <= {"id", "relation", "status", "counterexample", "millis", "detail"}
        assert {"id", "relation", "status", "millis"} <= set(c)
        assert c["id"] == "ybe/" + c["relation"]
    assert out.endswith(b"\n")


def test_drinfeld_gl11_window_8(capsysbinary):
    code, out = verify(capsysbinary, "drinfeld", "--m", "1", "--n", "1", "--trunc", "8")
    doc = json.loads(out)
    assert code == 0 and doc["summary"]["fail"] == 0 and doc["config"]["trunc"] == 8
    rels = {c["relation"] for c in doc["checks"]}
    assert "D2.X+X-.anticommutator.node1" in rels


def test_drinfeld_without_grading_fails(capsysbinary):
    code, out = verify(capsysbinary, "drinfeld", "--m", "1", "--n", "1", "--no-grading")
    doc = json.loads(out)
    assert code == 1
    assert doc["config"]["grading"] == "off"
    failed = {c["relation"] for c in doc["checks"] if c["status"] == "fail"}
    assert any("X-X.anticommutator" in r for r in failed)
    assert all("counterexample" in c for c in doc["checks"] if c["status"] == "fail")


def test_mismatch_gives_exit_one(capsysbinary):
    code, out = verify(capsysbinary, "drinfeld", "--m", "2", "--n", "1", "--mode", "sampled", "--seed", "3")
    doc = json.loads(out)
    assert code == 1
    assert doc["summary"]["fail"] == 0 and doc["summary"]["mismatch"] == 1


@pytest.mark.parametrize("args", [
    ["ybe", "--m", "4", "--n", "3"],
    ["ybe", "--trunc", "3"],
    ["ybe", "--trunc", "6", "--guard", "5"],
    ["ybe", "--seed", "-1"],
    ["ybe", "--m", "0"],
])
def test_usage_errors(args, capsys):
    assert main(["verify", *args]) == 2
    assert "error" in capsys.readouterr().err


def test_unknown_suite_is_a_usage_error():
    r = subprocess.run([sys.executable, "-m", "uqglmn", "verify", "nonsense"], capture_output=True)
    assert r.returncode == 2


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(suites=("ybe", "bogus")).validate()
    with pytest.raises(ConfigError):
        RunConfig(suites=()).validate()
    assert RunConfig(2, 3).validate().guard_value == 6


def test_empty_report_summary():
    rep = VerificationReport({"suites": []})
    doc = json.loads(emit(rep))
    assert doc == {"config": {"suites": []}, "checks": [], "summary": {"pass": 0, "fail": 0, "mismatch": 0, "skipped": 0}}
    assert rep.exit_code() == 0


def test_single_pass_record():
    rep = VerificationReport({})
    rep.add("ybe", VerificationOutcome("ybe.demo", Status.PASS))
    doc = json.loads(emit(rep))
    assert doc["checks"] == [{"id": "ybe/ybe.demo", "relation": "ybe.demo", "status": "pass", "millis": 0}]
    assert b"pass=1 fail=0" in emit(rep, "text")


def test_fault_injection_reports_coordinates(monkeypatch):
    real = rmatrix.build_r

    def corrupted(ps, x=None, y=None):
        R = real(ps, x, y)
        e = dict(R.matrix._e)
        e[(0, 0)] = e[(0, 0)] * 2
        return dataclasses.replace(R, matrix=GradedMatrix._make(R.matrix.parities, e))

    monkeypatch.setattr(rmatrix, "build_r", corrupted)
    rep = run(RunConfig(1, 1, suites=("ybe",)))
    bad = [c for c in rep.checks if c.status is Status.FAIL]
    assert bad and rep.exit_code() == 1
    cx = bad[0].counterexample
    assert {"row", "col", "lhs", "rhs"} <= set(cx) and cx["lhs"] != cx["rhs"]


def test_sampled_mode_is_labeled():
    doc = json.loads(emit(run(RunConfig(1, 1, mode="sampled", seed=11, suites=("rll",)))))
    cfg = doc["config"]
    assert cfg["mode"] == "sampled" and cfg["seed"] == 11
    assert set(cfg["samples"]) == {"q", "a", "b"} and "sampled" in cfg["note"]
    assert doc["summary"]["fail"] == 0


def test_symbolic_mode_has_no_seed():
    doc = json.loads(emit(run(RunConfig(1, 1, suites=("rmatrix-props",)))))
    assert "seed" not in doc["config"] and doc["config"]["mode"] == "symbolic"
    assert all(c["millis"] == 0 for c in doc["checks"])


@given(st.integers(0, 2 ** 64 - 1))
def test_sample_values_avoid_degenerate_points(seed):
    v = sample_values(seed)
    assert v == sample_values(seed)
    assert v["q"] ** 2 != 1 and all(v["a"] != v["b"] * v["q"] ** k for k in range(-12, 13))


def test_symbolic_reports_are_byte_identical():
    cfg = RunConfig(1, 1, suites=("ybe", "rmatrix-props", "negative"))
    assert emit(run(cfg)) == emit(run(cfg))


def test_text_format(tmp_path, capsys):
    out = tmp_path / "r.txt"
    assert main(["verify", "rmatrix-props", "--format", "text", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.splitlines()[0].split() == ["check", "status", "ms"]
    assert "rmatrix-props/r.pt-symmetry" in text


def test_suite_order_is_dependency_order():
    assert SUITES.index("rmatrix-props") < SUITES.index("rll") < SUITES.index("drinfeld")
    rep = run(RunConfig(1, 1, suites=("rll", "ybe")))
    suites = [c.suite for c in rep.sorted_checks()]
    assert suites == sorted(suites, key=SUITES.index)
