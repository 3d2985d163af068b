import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from multisym.canonical import VerticalData, build_canonical
from multisym.exterior import AltElement, evaluate, pullback
from multisym.linalg import LinearMap, PreconditionError, Subspace
from multisym.msym import MSpace, classify, orthogonal
from multisym.reduction import (
    coisotropic_ideal_check,
    counterexample,
    lagrangian_projection_test,
    project_subspace,
    reduce,
)
from multisym.sampling import random_subspace


@pytest.fixture(scope="module")
def ce():
    return counterexample()


def test_counterexample_N_coisotropic_with_trivial_orthogonal(ce):
    ms, N = ce["ms"], ce["N"]
    assert N.dim == 5
    cls = classify(ms, N, 2)
    assert cls.is_j_coisotropic
    assert cls.orthogonal.dim == 0


def test_counterexample_intersection(ce):
    assert ce["L"] & ce["N"] == ce["LN"]
    assert ce["LN"] == Subspace.span([[1, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]], 6)


def test_counterexample_projection_not_lagrangian(ce):
    red = reduce(ce["ms"], ce["N"])
    assert red.dim == 5 and red.K.dim == 0
    rep = lagrangian_projection_test(red, ce["L"], 2)
    assert not rep.is_lagrangian
    assert rep.witness == ce["witness"]
    # the witness lies in N and is 2-orthogonal to L∩N
    w = ce["witness"]
    assert ce["N"].contains(w)
    for a in ce["LN"].basis:
        for b in ce["LN"].basis:
            assert evaluate(ce["ms"].omega, w, a, b) == 0
    assert not ce["LN"].contains(w)


def test_reduce_whole_space_is_quotient_by_kernel():
    ms = MSpace(AltElement(3, 2, {(1, 2): 1}))
    red = reduce(ms, ms.full())
    assert red.K == ms.kernel_flat1() and red.dim == 2
    assert red.reduced.is_regular()


def test_trivial_kernel_gives_identity():
    model = build_canonical(VerticalData.build(3), 2)
    red = reduce(model.ms, model.ms.full())
    assert red.dim == 6
    assert red.projection.matrix == LinearMap.identity(6).matrix
    assert red.omega_N == model.omega


def test_not_coisotropic_raises(ce):
    with pytest.raises(PreconditionError, match="not 2-coisotropic"):
        reduce(ce["ms"], ce["LN"])


@given(st.integers(0, 2 ** 31))
def test_reduced_form_independent_of_section(seed):
    rng = random.Random(seed)
    model = build_canonical(VerticalData.build(3), 1)
    ms = model.ms
    while True:
        N = random_subspace(ms.n, rng, rng.randint(3, 6))
        if classify(ms, N, 1).is_j_coisotropic:
            break
    red = reduce(ms, N)
    # another right inverse: add a K-valued correction to the default section
    Kc = Subspace.span([N.coordinates(v) for v in red.K.basis], N.dim)
    cols = []
    for c in range(red.dim):
        col = list(red.section(LinearMap.identity(red.dim).matrix[c]))
        for kb in Kc.basis:
            t = rng.randint(-2, 2)
            col = [x + t * y for x, y in zip(col, kb)]
        cols.append(col)
    other = LinearMap.from_columns(cols, N.dim) if cols else None
    if other is None:
        return
    red2 = reduce(ms, N, section=other)
    assert red2.omega_N == red.omega_N
    assert pullback(red.projection, red.omega_N) == pullback(N.inclusion(), ms.omega)


def test_bad_section_rejected(ce):
    with pytest.raises(PreconditionError):
        reduce(ce["ms"], ce["N"], section=LinearMap.zero(5, 5))


@given(st.integers(0, 2 ** 31))
def test_coisotropic_ideal(seed):
    rng = random.Random(seed)
    model = build_canonical(VerticalData.build(3), 2)
    ms = model.ms
    N = random_subspace(ms.n, rng, rng.randint(3, 6))
    if not classify(ms, N, 2).is_j_coisotropic:
        with pytest.raises(PreconditionError):
            coisotropic_ideal_check(ms, N)
        return
    assert coisotropic_ideal_check(ms, N, samples=5, seed=seed)["ok"]


def test_project_subspace_dimension(ce):
    red = reduce(ce["ms"], ce["N"])
    P = project_subspace(red, ce["L"])
    assert P.dim == 2
    assert orthogonal(red.reduced, P, 2).dim > P.dim
