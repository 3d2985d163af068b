from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from multisym.exterior import AltElement
from multisym.linalg import DegreeError, PreconditionError, Subspace, nullspace
from multisym.msym import (
    MSpace,
    classify,
    is_k_isotropic_via_pullback,
    isotropic_decomposition_check,
    orthogonal,
    orthogonal_properties_check,
)

from conftest import alt_terms, leibniz_eval, small_rational


def unit(n, i):
    return [Fraction(int(i == j)) for j in range(n)]


def oracle_orthogonal(terms, n, degree, W_basis, j):
    """Solve ω(v, w_1..w_j, e_I) = 0 for v, evaluating ω by the Leibniz formula."""
    rows = []
    for ws in combinations(W_basis, j):
        for I in combinations(range(n), degree - 1 - j):
            tail = list(ws) + [unit(n, i) for i in I]
            rows.append([leibniz_eval(terms, [unit(n, a)] + tail) for a in range(n)])
    if not rows:
        return Subspace.full(n)
    return Subspace.span(nullspace(rows, n), n)


SYMPLECTIC = MSpace(AltElement(4, 2, {(1, 3): 1, (2, 4): 1}))
VOLUME4 = MSpace(AltElement(4, 4, {(1, 2, 3, 4): 1}))


@given(
    st.integers(2, 3).flatmap(
        lambda deg: st.tuples(
            st.just(deg),
            alt_terms(4, deg),
            st.lists(st.lists(small_rational, min_size=4, max_size=4), max_size=3),
            st.integers(1, deg - 1),
        )
    )
)
def test_orthogonal_matches_oracle(data):
    deg, terms, rows, j = data
    ms = MSpace(AltElement(4, deg, terms))
    W = Subspace.span(rows, 4)
    expect = oracle_orthogonal(terms, 4, deg, W.basis, j) if j <= W.dim else Subspace.full(4)
    assert orthogonal(ms, W, j) == expect


@given(
    alt_terms(5, 3),
    st.lists(st.lists(small_rational, min_size=5, max_size=5), max_size=4),
    st.lists(st.lists(small_rational, min_size=5, max_size=5), max_size=4),
    st.integers(1, 2),
)
def test_orthogonal_properties_hold(terms, a, b, j):
    ms = MSpace(AltElement(5, 3, terms))
    rep = orthogonal_properties_check(ms, Subspace.span(a, 5), Subspace.span(b, 5), j)
    assert all(rep.values()), rep


@given(alt_terms(4, 3), st.lists(st.lists(small_rational, min_size=4, max_size=4), max_size=4))
def test_isotropy_via_pullback_agrees(terms, rows):
    ms = MSpace(AltElement(4, 3, terms))
    W = Subspace.span(rows, 4)
    assert classify(ms, W, ms.k).is_j_isotropic == is_k_isotropic_via_pullback(ms, W)


def test_zero_subspace_orthogonal_is_everything():
    assert orthogonal(VOLUME4, Subspace.zero(4), 2) == Subspace.full(4)


def test_orthogonal_of_whole_space_is_kernel():
    ms = MSpace(AltElement(3, 2, {(1, 2): 1}))
    assert orthogonal(ms, ms.full(), 1) == Subspace.coordinate(3, [2])
    assert ms.kernel_flat1() == Subspace.coordinate(3, [2])
    assert not ms.is_regular()


def test_symplectic_lagrangians():
    L = Subspace.coordinate(4, [0, 1])
    cls = classify(SYMPLECTIC, L, 1)
    assert cls.is_j_isotropic and cls.is_j_coisotropic and cls.is_j_lagrangian
    line = Subspace.coordinate(4, [0])
    cls = classify(SYMPLECTIC, line, 1)
    assert cls.is_j_isotropic and not cls.is_j_coisotropic
    assert orthogonal(SYMPLECTIC, line, 1) == Subspace.coordinate(4, [0, 1, 3])


def test_volume_form_hyperplanes():
    # for a volume form, a hyperplane is its own (n-1)-orthogonal
    H = Subspace.coordinate(4, [0, 1, 2])
    assert orthogonal(VOLUME4, H, 3) == H
    assert classify(VOLUME4, H, 3).is_j_lagrangian


def test_degenerate_kernel_absorbed():
    # ω = dx1∧dx2 on Q^3: the line along x3 is the kernel of ♭₁
    ms = MSpace(AltElement(3, 2, {(1, 2): 1}))
    L = Subspace.coordinate(3, [0])
    assert classify(ms, L, 1).is_j_lagrangian
    assert classify(ms, Subspace.coordinate(3, [0, 2]), 1).is_j_lagrangian
    assert not classify(ms, Subspace.coordinate(3, [2]), 1).is_j_coisotropic


def test_isotropic_decomposition():
    U = Subspace.coordinate(4, [0, 1])
    W = Subspace.coordinate(4, [2, 3])
    assert isotropic_decomposition_check(SYMPLECTIC, U, W).ok
    with pytest.raises(PreconditionError):
        isotropic_decomposition_check(SYMPLECTIC, U, U)
    with pytest.raises(PreconditionError):
        isotropic_decomposition_check(SYMPLECTIC, Subspace.coordinate(4, [0, 2]), Subspace.coordinate(4, [1, 3]))


def test_orthogonal_order_range():
    with pytest.raises(DegreeError):
        orthogonal(SYMPLECTIC, Subspace.zero(4), 2)


def test_flat_matrix_shape():
    f = VOLUME4.flat(2)
    assert (f.source, f.target) == (6, 6)
    assert f.is_invertible()
