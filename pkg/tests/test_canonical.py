import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from multisym.canonical import (
    HypothesisError,
    VerticalData,
    admissible_indices,
    admissible_tuples,
    build_canonical,
    build_multisymplectomorphism,
    conjugate,
    flat_image_lemma_check,
    flat_image_lemma_check_model,
    lagrangian_complement,
    type_kr_witness,
    vertical_dimension,
    vertical_forms_subspace,
)
from multisym.exterior import AltElement, evaluate, format_alt
from multisym.linalg import PreconditionError, Subspace
from multisym.msym import MSpace, classify, is_k_isotropic_via_pullback
from multisym.sampling import random_invertible

from conftest import leibniz_eval


def model_for(m, k, r, e):
    return build_canonical(VerticalData.coordinate(m, range(m - e + 1, m + 1), r), k)


def test_signed_model_m3_k2():
    model = build_canonical(VerticalData.build(3), 2)
    assert model.omega.terms == {(1, 2, 4): 1, (1, 3, 5): 1, (2, 3, 6): 1}
    assert [model.fiber_label(t) for t in range(3)] == ["a12", "a13", "a23"]


def test_signed_model_m2_k1_is_symplectic():
    model = build_canonical(VerticalData.build(2), 1)
    # w^t ∧ dx^t with fiber axes 3, 4
    assert model.omega.terms == {(1, 3): -1, (2, 4): -1}


@given(st.integers(0, 2 ** 31), st.sampled_from([(3, 1), (3, 2), (4, 2), (4, 3)]))
def test_signed_evaluation_formula(seed, mk):
    """Ω_L((v_1,a_1), …) = Σ_j (-1)^{j+1} a_j(v_1, …, v̂_j, …) for the full model."""
    m, k = mk
    model = build_canonical(VerticalData.build(m), k)
    rng = random.Random(seed)
    vs = [[Fraction(rng.randint(-3, 3)) for _ in range(model.n)] for _ in range(k + 1)]
    expect = Fraction(0)
    for j in range(k + 1):
        a = {I: vs[j][m + t] for t, I in enumerate(model.indices)}
        rest = [v[:m] for jj, v in enumerate(vs) if jj != j]
        expect += (-1) ** j * leibniz_eval(a, rest)
    assert evaluate(model.omega, *vs) == expect


def test_unsigned_sum_is_not_alternating():
    # Σ_j a_j(v̂_j) without the sign: swapping two slots does not flip the value
    m, idx = 3, [(1, 2), (1, 3), (2, 3)]

    def unsigned(*vs):
        total = Fraction(0)
        for j, v in enumerate(vs):
            a = {I: v[m + t] for t, I in enumerate(idx)}
            total += leibniz_eval(a, [u[:m] for jj, u in enumerate(vs) if jj != j])
        return total

    e1, e2, f12 = ([int(i == j) for j in range(6)] for i in (0, 1, 3))
    assert unsigned(e1, e2, f12) == 1
    assert unsigned(e1, f12, e2) == 1  # an alternating form would give -1
    signed = build_canonical(VerticalData.build(3), 2).omega
    assert evaluate(signed, e1, f12, e2) == -1


@pytest.mark.parametrize("m,e,k,r", [(m, e, k, r) for m in range(1, 6) for e in range(m + 1) for k in range(1, m + 1) for r in range(0, 4)])
def test_vertical_dimension_counts_subsets(m, e, k, r):
    E = set(range(m - e + 1, m + 1))
    if r == 0 or r > e:
        expect = sum(1 for _ in combinations(range(1, m + 1), k))
    else:
        expect = sum(1 for I in combinations(range(1, m + 1), k) if len(E & set(I)) <= r - 1)
    assert vertical_dimension(m, e, k, r) == expect
    rr = r if r <= e else 0
    assert len(admissible_indices(m, k, sorted(E), rr)) == expect


@given(st.integers(0, 2 ** 31))
def test_vertical_forms_two_methods_agree(seed):
    rng = random.Random(seed)
    m = rng.randint(2, 5)
    k = rng.randint(1, m)
    e = rng.randint(0, m)
    r = rng.randint(0, 3)
    E = Subspace.span([[rng.randint(-2, 2) for _ in range(m)] for _ in range(e)], m)
    comb_ = vertical_forms_subspace(E, r, k)
    kern = vertical_forms_subspace(E, r, k, method="kernel")
    assert comb_ == kern


@pytest.mark.parametrize("m,k,r,e", list(admissible_tuples(4, 3, (0, 2, 3))))
def test_model_lagrangian_props(m, k, r, e):
    model = model_for(m, k, r, e)
    assert classify(model.ms, model.L, k).is_j_lagrangian
    assert classify(model.ms, model.W, 1).is_j_lagrangian
    assert model.ms.is_regular()


@pytest.mark.parametrize("m,k,r,e", list(admissible_tuples(4, 3, (1,))))
def test_r1_kernel_is_E(m, k, r, e):
    model = model_for(m, k, r, e)
    assert model.ms.kernel_flat1() == model.E


def test_hypothesis_failures():
    with pytest.raises(HypothesisError):
        VerticalData.coordinate(3, (3,), 2).check(2)   # r > dim E
    with pytest.raises(HypothesisError):
        VerticalData.coordinate(3, (2, 3), 1).check(2)  # k - r + 1 > codim E
    with pytest.raises(HypothesisError):
        VerticalData.build(2).check(3)                  # k > m


def test_type_kr_on_conjugates():
    rng = random.Random(7)
    for m, k, r, e in [(3, 2, 0, 0), (4, 2, 2, 2), (3, 1, 2, 2), (4, 3, 3, 3)]:
        model = model_for(m, k, r, e)
        G = random_invertible(model.n, rng)
        ms, W, E = conjugate(model, G)
        U = lagrangian_complement(ms, W, E, r)
        assert U.is_complement(W) and is_k_isotropic_via_pullback(ms, U)
        wit = type_kr_witness(ms, W, E, r)
        assert wit.roundtrip and wit.dimension_certificate


def test_multisymplectomorphism_identity_on_model():
    model = model_for(3, 2, 2, 2)
    wit = build_multisymplectomorphism(model.ms, model.L, model.W, model.E, 2)
    assert wit.roundtrip
    assert wit.Phi.matrix == tuple(tuple(Fraction(int(i == j)) for j in range(model.n)) for i in range(model.n))


def test_type_kr_rejects_bad_data():
    model = model_for(3, 2, 0, 0)
    with pytest.raises(PreconditionError):
        lagrangian_complement(model.ms, model.L, None, 0)  # L is not 1-Lagrangian
    symp = MSpace(AltElement(4, 2, {(1, 3): 1, (2, 4): 1}))
    with pytest.raises(PreconditionError):
        build_multisymplectomorphism(symp, Subspace.coordinate(4, [0, 2]), Subspace.coordinate(4, [1, 3]), None, 0)


@pytest.mark.parametrize("m,k,r,e", list(admissible_tuples(4, 3, (0, 2, 3))))
def test_flat_image(m, k, r, e):
    rep = flat_image_lemma_check_model(model_for(m, k, r, e))
    assert rep.ok
    ms = model_for(m, k, r, e).ms
    for f, v in zip(rep.forms, rep.witnesses):
        from multisym.exterior import contract

        assert contract(AltElement.from_vector(v), ms.omega) == f


def test_flat_image_non_coordinate_E():
    rng = random.Random(3)
    model = model_for(4, 2, 2, 2)
    ms, W, E = conjugate(model, random_invertible(model.n, rng))
    assert flat_image_lemma_check(ms, W, E, 2).ok


def test_format_of_model():
    assert format_alt(build_canonical(VerticalData.build(3), 2).omega) == (
        "1 dx1^dx2^dx4 + 1 dx1^dx3^dx5 + 1 dx2^dx3^dx6"
    )
