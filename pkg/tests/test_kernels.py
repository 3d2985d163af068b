from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from multisym import _kernels_py as py
from multisym import kernels

from conftest import perm_sign

try:
    from multisym import _kernels_c as cy
except ImportError:  # extension not built
    cy = None

needs_c = pytest.mark.skipif(cy is None, reason="compiled kernels not built")

index_sets = st.lists(st.integers(1, 8), max_size=5, unique=True).map(lambda xs: tuple(sorted(xs)))


def oracle_merge(a, b):
    if set(a) & set(b):
        return 0, None
    seq = list(a) + list(b)
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    return perm_sign(order), tuple(sorted(seq))


@given(index_sets, index_sets)
def test_merge_sign_matches_permutation_parity(a, b):
    assert py.merge_sign(a, b) == oracle_merge(a, b)


@given(index_sets, index_sets)
def test_split_sign_inverts_merge(sub, other):
    s, full = oracle_merge(sub, other)
    if s == 0:
        return
    assert py.split_sign(sub, full) == (s, other)


def test_split_sign_rejects_non_subset():
    assert py.split_sign((1, 4), (1, 2, 3)) == (0, None)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


@needs_c
@given(index_sets, index_sets)
def test_compiled_merge_and_split_agree(a, b):
    assert cy.merge_sign(a, b) == py.merge_sign(a, b)
    assert cy.split_sign(a, b) == py.split_sign(a, b)


terms = st.dictionaries(index_sets, st.fractions(-4, 4, max_denominator=4).filter(bool), max_size=6)


@needs_c
@given(terms, terms)
def test_compiled_wedge_and_contract_agree(ta, tb):
    assert cy.wedge_terms(ta, tb) == py.wedge_terms(ta, tb)
    assert cy.contract_terms(ta, tb) == py.contract_terms(ta, tb)


matrices = st.integers(1, 5).flatmap(
    lambda c: st.tuples(
        st.just(c),
        st.lists(st.lists(st.fractions(-5, 5, max_denominator=3), min_size=c, max_size=c), max_size=5),
    )
)


@given(matrices)
def test_rref_fraction_and_integer_paths_agree(data):
    ncols, rows = data
    red, piv = py.rref_fractions([list(r) for r in rows], ncols)
    ints = [[int(x * 6) for x in r] for r in rows]
    red_i, piv_i = py.rref_int(ints, ncols)
    red_s, piv_s = py.rref_fractions([[Fraction(x) for x in r] for r in ints], ncols)
    assert piv_i == piv_s
    normalized = [[Fraction(x, r[c]) for x in r] for r, c in zip(red_i, piv_i)]
    assert normalized == [list(r) for r in red_s]
    assert len(piv) == len(red)


@needs_c
@given(matrices)
def test_compiled_rref_agrees(data):
    ncols, rows = data
    assert cy.rref_fractions([list(r) for r in rows], ncols) == py.rref_fractions([list(r) for r in rows], ncols)


def test_kernels_accept_polynomial_coefficients():
    from multisym.poly import Poly

    x = Poly.var(2, 0)
    out = py.wedge_terms({(1,): x}, {(2,): x})
    assert out == {(1, 2): x * x}
