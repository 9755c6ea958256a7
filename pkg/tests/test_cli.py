import io
import json
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from l0tensor import theorems
from l0tensor.cli import main
from l0tensor.document import VERSION, load_document
from l0tensor.errors import DocumentError
from l0tensor.fibers import NormValue

SAMPLE = Path(__file__).resolve().parent.parent / "samples" / "basic.json"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def write_doc(tmp_path, raw, name="doc.json"):
    p = tmp_path / name
    p.write_text(raw if isinstance(raw, str) else json.dumps(raw))
    return str(p)


def small_doc(**extra):
    raw = {
        "version": VERSION,
        "spaces": {"X": {"atoms": [["a", "1"], ["b", "1"]]}},
        "modules": {"M": {"space": "X", "fiber": {"kind": "l1", "dim": 2}}},
        "elements": {"v": {"module": "M", "coords": [["1", "-2"], ["0", "3"]]}},
        "assertions": [],
    }
    raw.update(extra)
    return raw


def test_check_sample_passes():
    code, out = run("check", str(SAMPLE))
    assert code == 0
    assert out.count(": PASS ") == 8 and "FAIL" not in out


def test_norm_command_with_expected_value():
    code, out = run("norm", str(SAMPLE), "v")
    assert code == 0
    assert "norm(v) at a: 3/1" in out and "CASE 0: PASS" in out


def test_tensor_command():
    code, out = run("tensor", "hs", str(SAMPLE), "I2")
    assert code == 0 and "hs(I2) at a: sqrt(2/1)" in out
    code, out = run("tensor", "pi", str(SAMPLE), "I1")
    assert code == 0 and "pi(I1) at b: 2/1" in out


def test_wrong_expected_value_fails(tmp_path):
    raw = small_doc(assertions=[{"check": "norm", "ref": "v", "expected": ["3", "4"]}])
    code, out = run("check", write_doc(tmp_path, raw))
    assert code == 1 and "CASE 0: FAIL" in out


def test_zero_denominator_is_input_error(tmp_path, capsys):
    raw = small_doc()
    raw["elements"]["v"]["coords"][1][1] = "1/0"
    code, _ = run("check", write_doc(tmp_path, raw))
    assert code == 2
    assert "elements.v.coords[1][1]" in capsys.readouterr().err


def test_syntax_error_reports_position(tmp_path, capsys):
    code, _ = run("check", write_doc(tmp_path, '{"version":\n  "l0tensor-doc/1", "spaces": }'))
    assert code == 2
    assert "line 2 column" in capsys.readouterr().err


def test_unresolved_reference(tmp_path, capsys):
    raw = small_doc(assertions=[{"check": "norm", "ref": "w", "expected": "1"}])
    code, _ = run("check", write_doc(tmp_path, raw))
    assert code == 2 and "'w'" in capsys.readouterr().err


def test_unsupported_kinds_names_operation(tmp_path, capsys):
    raw = small_doc(
        modules={"M": {"space": "X", "fiber": {"kind": "l1", "dim": 2}},
                 "H": {"space": "X", "fiber": {"kind": "l2", "dim": 3}}},
        tensors={"t": {"left": "M", "right": "H",
                       "matrices": [[["1", "0", "0"], ["0", "0", "0"]]] * 2}},
        assertions=[{"check": "pi", "ref": "t", "expected": "1"}])
    code, _ = run("check", write_doc(tmp_path, raw))
    assert code == 2 and "projective_norm" in capsys.readouterr().err


def test_missing_file_and_bad_arguments(capsys):
    assert run("check", "/nonexistent/doc.json")[0] == 2
    assert run("verify", "TH-NOPE")[0] == 2
    assert run("verify", "TH-HB", "--tol", "1/0")[0] == 2
    assert run("frobnicate")[0] == 2


def test_load_document_version():
    with pytest.raises(DocumentError):
        load_document(json.dumps({"version": "other/2"}))


def test_verify_example():
    code, out = run("verify", "TH-PI-ELEM", "--seed", "7", "--cases", "50")
    assert code == 0
    assert out.strip().splitlines()[-1] == "TH-PI-ELEM: 50/50 passed"


def test_reports_are_byte_identical():
    assert run("verify", "TH-NULL", "--seed", "3", "--cases", "15") == \
        run("verify", "TH-NULL", "--seed", "3", "--cases", "15")
    a = run("verify", "TH-SUM-HOM", "--seed", "1", "--cases", "3", "--tol", "1/1000")
    assert a == run("verify", "TH-SUM-HOM", "--seed", "1", "--cases", "3", "--tol", "1/1000")
    assert run("verify", "TH-NULL", "--seed", "4", "--cases", "15") != a


def test_counterexample_round_trip(tmp_path, monkeypatch):
    # inject a fault: report twice the projective norm
    real = theorems.projective_norm_values

    def doubled(alpha):
        return [NormValue.of_exact(2 * nv.exact) for nv in real(alpha)]

    monkeypatch.setattr(theorems, "projective_norm_values", doubled)
    code, out = run("verify", "TH-PI-ELEM", "--seed", "0", "--cases", "10")
    assert code == 1
    docs = [line.split(": ", 1)[1] for line in out.splitlines() if line.startswith("COUNTEREXAMPLE")]
    assert docs
    path = write_doc(tmp_path, docs[0], "cex.json")
    code, out = run("check", path)
    assert code == 1 and "FAIL" in out
    # the same document passes once the fault is gone
    monkeypatch.setattr(theorems, "projective_norm_values", real)
    assert run("check", path)[0] == 0


def test_theorem_assertion_with_inconsistent_data_fails(tmp_path):
    # a hand-written theorem case whose data contradicts the claim cannot pass:
    # a coordinate projection scaled by 2 is not a quotient operator
    raw = small_doc(
        modules={"M": {"space": "X", "fiber": {"kind": "l1", "dim": 2}},
                 "N": {"space": "X", "fiber": {"kind": "l1", "dim": 1}}},
        homs={"T": {"source": "M", "target": "N", "matrices": [[["2", "0"]], [["2", "0"]]]}},
        assertions=[{"check": "theorem", "theorem": "TH-QUOT-TENSOR-PI", "refs": {"T": "T", "S": "T"}}])
    code, out = run("check", write_doc(tmp_path, raw))
    assert code == 1 and "FAIL" in out


def test_sum_and_quotient_assertions(tmp_path):
    raw = small_doc(
        modules={"M": {"space": "X", "fiber": {"kind": "l1", "dim": 2}},
                 "N": {"space": "X", "fiber": {"kind": "l1", "dim": 1}}},
        elements={"d": {"module": "M", "coords": [["1", "0"], ["0", "1"]]}},
        homs={"P": {"source": "M", "target": "N", "matrices": [[["1", "0"]], [["0", "1"]]]}},
        families={"F": {"module": "M", "direction": "d",
                        "atoms": [{"form": "geometric", "a": "1", "r": "1/2"},
                                  {"form": "geometric", "a": "1", "r": "1/3"}]}},
        assertions=[{"check": "sum", "ref": "F", "tol": "1/1000", "expected": [["1", "0"], ["0", "1/2"]]},
                    {"check": "quotient", "ref": "P", "expected": True},
                    {"check": "summable", "ref": "F", "expected": {"a": "summable", "b": "summable"}}])
    code, out = run("check", write_doc(tmp_path, raw))
    assert code == 0, out


def test_declared_bound_contradicted_by_data(tmp_path, capsys):
    raw = small_doc(
        elements={"d": {"module": "M", "coords": [["1", "0"], ["0", "1"]]}},
        families={"F": {"module": "M", "direction": "d",
                        "atoms": [{"form": "geometric", "a": "1", "r": "1/2",
                                   "bound": {"kind": "geometric", "c": "1/100", "r": "1/2"}},
                                  {"form": "zero"}]}},
        assertions=[{"check": "summable", "ref": "F", "expected": {"a": "summable"}}])
    code, _ = run("check", write_doc(tmp_path, raw))
    assert code == 2 and "exceeds declared bound" in capsys.readouterr().err


def test_case_documents_round_trip_through_json():
    for tid in theorems.THEOREMS:
        raw = theorems.generate_case(tid, 5, 0)
        text = json.dumps(raw)
        doc = load_document(text)
        assert doc.assertions[0]["theorem"] == tid
        assert theorems.run_case(tid, 5, 0).document == json.dumps(raw, sort_keys=True, separators=(",", ":"))


def test_tol_override_only_for_tolerant_suites():
    raw = theorems.generate_case("TH-DIAG", 0, 0, F(1, 100))
    assert raw["assertions"][0]["refs"]["tol"] == "1/100"
    raw = theorems.generate_case("TH-HB", 0, 0, F(1, 100))
    assert "tol" not in raw["assertions"][0]["refs"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "l0tensor", "check", str(SAMPLE)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "CASE 7: PASS" in proc.stdout
