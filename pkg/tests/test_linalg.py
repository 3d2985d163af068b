from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from multisym.linalg import (
    LinearMap,
    PreconditionError,
    Subspace,
    direct_sum_projections,
    nullspace,
    rank,
    rref,
    solve,
)

from conftest import small_rational

N = 4
rows_st = st.lists(st.lists(small_rational, min_size=N, max_size=N), max_size=5)


def matvec(rows, x):
    return [sum((Fraction(a) * b for a, b in zip(r, x)), Fraction(0)) for r in rows]


@given(rows_st)
def test_rank_nullity(rows):
    ns = nullspace(rows, N)
    assert rank(rows, N) + len(ns) == N
    for x in ns:
        assert all(v == 0 for v in matvec(rows, x))


@given(rows_st)
def test_rref_is_canonical(rows):
    red, piv = rref(rows, N)
    again, piv2 = rref(list(reversed(rows)), N)
    assert red == again and piv == piv2
    for r, p in zip(red, piv):
        assert r[p] == 1
        assert all(other[p] == 0 for other in red if other is not r)


@given(rows_st, st.lists(small_rational, min_size=N, max_size=N))
def test_solve_consistent_systems(rows, x):
    rhs = matvec(rows, x)
    sol = solve(rows, rhs, N)
    assert sol is not None
    assert matvec(rows, sol) == rhs


def test_solve_inconsistent():
    assert solve([[1, 1], [1, 1]], [1, 2], 2) is None


@given(rows_st, rows_st)
def test_dimension_formula(a, b):
    A, B = Subspace.span(a, N), Subspace.span(b, N)
    assert (A + B).dim + (A & B).dim == A.dim + B.dim
    assert (A & B) <= A and A <= A + B


@given(rows_st)
def test_complement_and_projections(a):
    A = Subspace.span(a, N)
    C = A.complement()
    assert A.is_complement(C)
    pa, pc = direct_sum_projections(A, C)
    for i in range(N):
        e = [Fraction(int(i == j)) for j in range(N)]
        back = [x + y for x, y in zip(A.inclusion()(pa(e)), C.inclusion()(pc(e)))]
        assert back == e


def test_projections_need_complements():
    A = Subspace.coordinate(3, [0])
    with pytest.raises(PreconditionError):
        direct_sum_projections(A, A)


@given(st.lists(st.lists(st.integers(-2, 2), min_size=N, max_size=N), min_size=N, max_size=N), rows_st)
def test_image_and_preimage(m, a):
    f = LinearMap.from_rows(m, N)
    A = Subspace.span(a, N)
    assert A.image(f).preimage(f).issubspace(Subspace.full(N))
    assert A.issubspace(A.image(f).preimage(f))
    if f.is_invertible():
        assert A.image(f).image(f.inverse()) == A
        assert f.compose(f.inverse()).matrix == LinearMap.identity(N).matrix


def test_coordinates_outside_raise():
    A = Subspace.coordinate(3, [0, 1])
    assert A.coordinates([2, 3, 0]) == (2, 3)
    with pytest.raises(PreconditionError):
        A.coordinates([0, 0, 1])


def test_equality_is_basis_independent():
    assert Subspace.span([[1, 1, 0], [1, -1, 0]], 3) == Subspace.coordinate(3, [0, 1])
    assert hash(Subspace.span([[2, 0]], 2)) == hash(Subspace.span([[1, 0]], 2))
