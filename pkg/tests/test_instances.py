import json
import os

import pytest

from multisym.instances import (
    InstanceParseError,
    canonical_instance,
    counterexample_instance,
    load,
    loads,
)
from multisym.linalg import Subspace
from multisym.reduction import counterexample

from conftest import INSTANCE_DIR

CORPUS = sorted(f for f in os.listdir(INSTANCE_DIR) if f.endswith(".json") and not f.startswith("bracket"))


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_round_trips_byte_for_byte(name):
    path = os.path.join(INSTANCE_DIR, name)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    inst = loads(text)
    assert inst.dumps() == text
    assert loads(inst.dumps()).to_json() == inst.to_json()


def test_counterexample_file_matches_builder():
    inst = load(os.path.join(INSTANCE_DIR, "counterexample.json"))
    assert inst.dumps() == counterexample_instance().dumps()
    ce = counterexample()
    assert inst.subspace("N") == ce["N"]
    assert inst.ms.omega == ce["ms"].omega
    assert inst.subspace("zero") == Subspace.zero(6)


def test_canonical_builder():
    inst = canonical_instance(4, 2, [3, 4], 2)
    assert inst.n == 4 + 5
    assert inst.subspace("W").dim == 5


def good():
    return {"n": 2, "k": 1, "omega": [{"idx": [1, 2], "coef": "1"}], "subspaces": {"A": [["1", "0"]]}}


@pytest.mark.parametrize(
    "mutate,where",
    [
        (lambda d: d.pop("n"), "n"),
        (lambda d: d.update(n=0), "n"),
        (lambda d: d.update(k=2), "k"),
        (lambda d: d.update(omega={}), "omega"),
        (lambda d: d["omega"][0].pop("coef"), "omega[0]"),
        (lambda d: d["omega"][0].update(idx=[1]), "omega[0].idx"),
        (lambda d: d["omega"][0].update(idx=[1, 3]), "omega[0].idx"),
        (lambda d: d["omega"][0].update(coef="x"), "omega[0].coef"),
        (lambda d: d["omega"][0].update(coef=0.5), "omega[0].coef"),
        (lambda d: d.update(subspaces=[]), "subspaces"),
        (lambda d: d["subspaces"].update(A=[["1"]]), "subspaces.A[0]"),
    ],
)
def test_parse_errors_name_the_field(mutate, where):
    data = good()
    mutate(data)
    with pytest.raises(InstanceParseError) as exc:
        loads(json.dumps(data))
    assert exc.value.where == where


def test_json_syntax_error_location():
    with pytest.raises(InstanceParseError, match="line 2 column"):
        loads('{"n": 2,\n "k": }')


def test_unknown_subspace():
    inst = loads(json.dumps(good()))
    with pytest.raises(InstanceParseError, match="unknown subspace"):
        inst.subspace("B")


def test_missing_file(tmp_path):
    with pytest.raises(InstanceParseError):
        load(tmp_path / "nope.json")
