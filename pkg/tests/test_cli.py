import json
import os

import pytest

from multisym.cli import main

from conftest import INSTANCE_DIR

CE = os.path.join(INSTANCE_DIR, "counterexample.json")
CAN = os.path.join(INSTANCE_DIR, "canonical_m3_k2.json")
BRACKET = os.path.join(INSTANCE_DIR, "bracket_r3.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_counterexample_N(capsys):
    code, out, _ = run(capsys, "classify", "--instance", CE, "--subspace", "N")
    assert code == 0
    assert "coisotropic: true, orthogonal: {0}" in out


def test_classify_zero_subspace_json(capsys):
    code, out, err = run(capsys, "classify", "--instance", CE, "--subspace", "zero", "--json", "-")
    assert code == 0
    data = json.loads(out)
    assert len(data["orthogonal"]) == 6 and data["dim"] == 0
    assert "orthogonal" in err


def test_classify_canonical_L(capsys):
    code, out, _ = run(capsys, "classify", "--instance", CAN, "--subspace", "L")
    assert code == 0 and "2-Lagrangian: true" in out


def test_reduce_projects_counterexample(capsys, tmp_path):
    path = tmp_path / "red.json"
    code, out, _ = run(capsys, "reduce", "--instance", CE, "--subspace", "N", "--project", "L", "--json", str(path))
    assert code == 0
    assert "NOT 2-Lagrangian" in out
    data = json.loads(path.read_text())
    assert data["quotient_dim"] == 5 and data["kernel"] == []
    assert data["projected_subspaces"]["L"]["classification"]["lagrangian"] is False


def test_reduce_requires_coisotropic(capsys):
    code, _, err = run(capsys, "reduce", "--instance", CE, "--subspace", "LN")
    assert code == 3 and "not 2-coisotropic" in err


def test_missing_instance_is_parse_error(capsys, tmp_path):
    code, _, err = run(capsys, "classify", "--instance", str(tmp_path / "missing.json"), "--subspace", "N")
    assert code == 2 and err.startswith("error:")


def test_unknown_subspace_is_parse_error(capsys):
    code, _, _ = run(capsys, "classify", "--instance", CE, "--subspace", "nope")
    assert code == 2


def test_bad_j_is_precondition(capsys):
    code, _, _ = run(capsys, "classify", "--instance", CE, "--subspace", "N", "--j", "5")
    assert code == 3


def test_bracket_example(capsys):
    code, out, _ = run(capsys, "bracket", BRACKET)
    assert code == 0
    assert "representative: -dx3" in out
    assert "deg a = 0, deg b = 0, deg {a, b} = 0" in out


def write(tmp_path, payload):
    p = tmp_path / "forms.json"
    p.write_text(json.dumps(payload))
    return str(p)


def test_bracket_bad_witness(capsys, tmp_path):
    path = write(tmp_path, {"n": 3, "omega": "dx1^dx2^dx3", "a": {"form": "x2 dx3", "witness": "e2"}, "b": {"form": "0", "degree": 1}})
    code, _, err = run(capsys, "bracket", path)
    assert code == 4 and err.startswith("witness error: a:")


def test_bracket_parse_errors(capsys, tmp_path):
    path = write(tmp_path, {"n": 3, "omega": "dx1^dx2^dx3", "a": {"form": "x2 dx3 +"}, "b": {"form": "0"}})
    code, _, err = run(capsys, "bracket", path)
    assert code == 2 and "a.form" in err
    path = write(tmp_path, {"n": 3, "omega": "dx1^dx2^dx3", "a": {"form": "x2 dx3"}, "b": {"form": "0"}})
    code, _, err = run(capsys, "bracket", path)
    assert code == 2 and "a.witness" in err


def test_bracket_zero_class_with_declared_degree(capsys, tmp_path):
    path = write(tmp_path, {"n": 3, "omega": "dx1^dx2^dx3", "a": {"form": "0", "degree": 1}, "b": {"form": "x2 dx3", "witness": "e1"}})
    code, out, _ = run(capsys, "bracket", path, "--json", "-")
    assert code == 0
    assert json.loads(out)["zero_class"] is True


def test_bracket_non_closed_omega(capsys, tmp_path):
    path = write(tmp_path, {"n": 3, "omega": "x1 dx2^dx3", "a": {"form": "0"}, "b": {"form": "0"}})
    code, _, _ = run(capsys, "bracket", path)
    assert code == 3


def test_verify_scope_counterexample(capsys):
    code, out, err = run(capsys, "verify-paper", "--scope", "counterexample", "--json", "-", "--no-timing")
    assert code == 0
    data = json.loads(out)
    assert [d["claim_id"] for d in data] == [
        "counterexample.coisotropic",
        "counterexample.projection_not_lagrangian",
        "counterexample.zero_orthogonal",
    ]
    assert all(d["status"] == "pass" and "wall_time" not in d for d in data)
    assert "3 passed" in err


def test_verify_empty_scope(capsys):
    code, out, _ = run(capsys, "verify-paper", "--scope", "no-such-claim")
    assert code == 0 and "no claims selected" in out


def test_verify_json_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    scope = "counterexample|msym|reduction"
    assert run(capsys, "verify-paper", "--scope", scope, "--no-timing", "--json", str(a))[0] == 0
    assert run(capsys, "verify-paper", "--scope", scope, "--no-timing", "--json", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_instance_command_matches_corpus(capsys):
    code, out, _ = run(capsys, "instance", "counterexample")
    assert code == 0
    with open(CE, encoding="utf-8") as fh:
        assert out == fh.read()
    code, out, _ = run(capsys, "instance", "canonical", "--m", "4", "--k", "2", "--e", "3,4", "--r", "2")
    with open(os.path.join(INSTANCE_DIR, "canonical_m4_k2_r2.json"), encoding="utf-8") as fh:
        assert out == fh.read()


def test_instance_hypothesis_violation(capsys):
    code, _, err = run(capsys, "instance", "canonical", "--m", "3", "--k", "2", "--e", "3", "--r", "2")
    assert code == 3 and "r ≤ dim E" in err


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify"])
    assert exc.value.code == 2
