"""The twelve acceptance criteria, each with its runtime bound."""
import itertools
import random
import time

from multisym.bundles import (
    build_form_bundle,
    build_multivector_bundle,
    complete_lift_check,
    fiber_reduction_model,
    hamiltonian_iff_lagrangian_check,
)
from multisym.canonical import (
    VerticalData,
    admissible_tuples,
    build_canonical,
    conjugate,
    flat_image_lemma_check,
    flat_image_lemma_check_model,
    lagrangian_complement,
    type_kr_witness,
    vertical_dimension,
)
from multisym.cli import main
from multisym.exterior import AltElement, FORM, VECTOR, pullback
from multisym.fields import bracket_identity_residual, d, parse_field, random_field, solve_constant_flat
from multisym.hamiltonian import conserved_quantity_check, graded_identities_check
from multisym.linalg import Subspace
from multisym.msym import MSpace, classify, orthogonal, orthogonal_properties_check
from multisym.reduction import lagrangian_projection_test, reduce
from multisym.sampling import hamiltonian_field, hamiltonian_random_class, random_invertible, random_subspace
from multisym.verify import closed_admissible_form


def model_for(m, k, r, e):
    return build_canonical(VerticalData.coordinate(m, range(m - e + 1, m + 1), r), k)


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_01_counterexample():
    with Clock() as clock:
        model = build_canonical(VerticalData.build(3), 2)
        ms = model.ms
        assert model.omega.terms == {(1, 2, 4): 1, (1, 3, 5): 1, (2, 3, 6): 1}
        # axes l1 l2 l3 a12 a13 a23
        N = Subspace.span(
            [[1, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 1, 0], [0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0]], 6
        )
        assert classify(ms, N, 2).is_j_coisotropic
        assert orthogonal(ms, N, 2).dim == 0
        LN = model.L & N
        assert LN == Subspace.span([[1, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]], 6)
        rep = lagrangian_projection_test(reduce(ms, N), model.L, 2)
        assert not rep.is_lagrangian
        a12 = (0, 0, 0, 1, 0, 0)
        assert rep.witness == a12
        assert orthogonal(ms, LN, 2).contains(a12) and not LN.contains(a12)
    assert clock.elapsed < 1.0


def test_criterion_02_canonical_models():
    with Clock() as clock:
        count = 0
        for m, k, r, e in admissible_tuples(5, 3, (0, 2, 3)):
            model = model_for(m, k, r, e)
            assert model.W.dim == vertical_dimension(m, e, k, r)
            assert classify(model.ms, model.L, k).is_j_lagrangian, (m, k, r, e)
            assert classify(model.ms, model.W, 1).is_j_lagrangian, (m, k, r, e)
            count += 1
        for m, k, r, e in admissible_tuples(5, 3, (1,)):
            model = model_for(m, k, r, e)
            assert model.ms.kernel_flat1() == model.E, (m, k, r, e)
            count += 1
        assert count > 50
    assert clock.elapsed < 30.0


def test_criterion_03_type_kr_construction():
    rng = random.Random(2024)
    tuples = [t for t in admissible_tuples(4, 3, (0, 2, 3)) if t[0] >= 2]
    with Clock() as clock:
        for _ in range(30):
            m, k, r, e = rng.choice(tuples)
            model = model_for(m, k, r, e)
            ms, W, E = conjugate(model, random_invertible(model.n, rng))
            U = lagrangian_complement(ms, W, E, r)
            assert U.is_complement(W)
            assert pullback(U.inclusion(), ms.omega).is_zero()
            wit = type_kr_witness(ms, W, E, r)
            assert pullback(wit.Phi, wit.model.omega) == ms.omega
    assert clock.elapsed < 60.0


def test_criterion_04_flat_image():
    rng = random.Random(4)
    for m, k, r, e in admissible_tuples(4, 3, (0, 2, 3)):
        rep = flat_image_lemma_check_model(model_for(m, k, r, e))
        assert rep.ok, (m, k, r, e)
    for _ in range(6):
        model = model_for(4, 2, 2, 2)
        ms, W, E = conjugate(model, random_invertible(model.n, rng))
        assert flat_image_lemma_check(ms, W, E, 2).ok


def test_criterion_05_orthogonal_properties():
    rng = random.Random(5)
    spaces = [
        build_canonical(VerticalData.build(3), 2).ms,
        build_canonical(VerticalData.coordinate(3, (3,), 1), 2).ms,
        MSpace(AltElement(4, 4, {(1, 2, 3, 4): 1})),
        MSpace(AltElement(5, 3, {(1, 2, 3): 1, (1, 4, 5): 2})),
    ]
    for ms in spaces:
        for _ in range(100):
            W1, W2 = random_subspace(ms.n, rng), random_subspace(ms.n, rng)
            j = rng.randint(1, ms.k)
            rep = orthogonal_properties_check(ms, W1, W2, j)
            assert all(rep.values()), rep


def test_criterion_06_graded_lie_algebra():
    rng = random.Random(6)
    with Clock() as clock:
        total = 0
        for text, n in (("dx1^dx2^dx3", 3), ("dx1^dx2^dx3^dx4", 4)):
            omega = parse_field(text, n)
            k = omega.degree - 1
            patterns = list(itertools.product(range(1, k + 1), repeat=3))
            triples = [
                tuple(hamiltonian_random_class(omega, q, rng, 2) for q in patterns[i % len(patterns)])
                for i in range(12)
            ]
            rep = graded_identities_check(omega, triples)
            assert all(rep.antisymmetry) and all(rep.jacobi)
            total += len(triples)
        assert total >= 20
    assert clock.elapsed < 60.0


def test_criterion_07_schouten_identity():
    rng = random.Random(7)
    omega = parse_field("dx1^dx2^dx3^dx4", 4)
    checked = 0
    for p, q in itertools.product((1, 2, 3), repeat=2):
        for _ in range(8):
            U, _ = hamiltonian_field(omega, p, rng, 3)
            V, _ = hamiltonian_field(omega, q, rng, 3)
            assert max(U.max_poly_degree(), V.max_poly_degree()) <= 3
            res = bracket_identity_residual(U, V, omega)
            if res is None:
                continue
            assert res.is_zero(), (p, q)
            checked += 1
    assert checked >= 50


def test_criterion_08_hamiltonian_iff_lagrangian():
    rng = random.Random(8)
    forms = [("dx1^dx2^dx3", 3), ("dx1^dx2^dx3^dx4", 4), ("dx1^dx2^dx3 + dx1^dx2^dx4", 4)]
    for text, n in forms:
        omega = parse_field(text, n)
        for q in (1, 2):
            mb = build_multivector_bundle(omega, q)
            fields = [random_field(n, q, VECTOR, 2, rng) for _ in range(2)]
            try:
                fields.append(hamiltonian_field(omega, q, rng, 1)[0])
            except RuntimeError:
                pass
            for U in fields:
                rep = hamiltonian_iff_lagrangian_check(mb, U)
                assert rep["pullback_identity"]
                assert all(p["lagrangian"] == p["closed_at_point"] for p in rep["points"])


def test_criterion_09_complete_lift():
    rng = random.Random(9)
    pairs = 0
    shapes = itertools.cycle(((2, 1), (3, 2), (3, 1)))
    while pairs < 24:
        n, deg = next(shapes)
        omega = random_field(n, deg, FORM, 2, rng)
        if d(omega).is_zero():
            continue
        for q in range(1, deg + 1):
            U = random_field(n, q, VECTOR, 2, rng)
            assert complete_lift_check(omega, q, [U])["lie_identity"] == [True]
            pairs += 1
    assert pairs >= 20
    for text, n in (("dx1^dx2^dx3", 3), ("dx1^dx2", 2)):
        omega = parse_field(text, n)
        for q in range(1, omega.degree):
            assert complete_lift_check(omega, q, [])["closed_sign_identity"]


def test_criterion_10_bundle_reduction():
    rng = random.Random(10)
    cases = [
        (3, 1, (), 0, (1, 2)),
        (3, 2, (), 0, (1, 2)),
        (3, 2, (2, 3), 2, (1, 2)),
        (4, 2, (), 0, (1, 2, 3)),
        (4, 2, (3, 4), 2, (1, 2, 3)),
        (4, 3, (3, 4), 2, (1, 2, 3)),
    ]
    with Clock() as clock:
        for m, k, e, r, q_axes in cases:
            fb = build_form_bundle(m, k, e, r)
            for _ in range(3):
                alpha = closed_admissible_form(fb, rng, 2)
                rep = fiber_reduction_model(fb, q_axes, alpha)
                e_q = sum(1 for a in e if a in q_axes)
                r_q = r if r <= e_q else 0
                assert rep.kernel_rank == vertical_dimension(m, len(e), k, r) - vertical_dimension(len(q_axes), e_q, k, r_q)
                assert rep.kernel_matches and rep.reduced_form_matches
                assert rep.projection_is_graph and rep.restricted_closed and rep.projected_lagrangian
    assert clock.elapsed < 120.0


def test_criterion_11_conserved_quantities():
    rng = random.Random(11)
    tested = 0
    for text, n in (("dx1^dx2^dx3", 3), ("dx1^dx2^dx3^dx4", 4)):
        omega = parse_field(text, n)
        k = omega.degree - 1
        for q in range(2, k + 1):
            for kind in ("random", "random", "random", "exact"):
                X, H = hamiltonian_field(omega, q, rng, 2)
                if kind == "exact":
                    alpha = d(random_field(n, q - 2, FORM, 3, rng))
                else:
                    alpha = random_field(n, q - 1, FORM, 2, rng)
                Ua = solve_constant_flat(omega, d(alpha), k - q + 1)
                rep = conserved_quantity_check(X, H, alpha, omega, Ua)
                assert rep.agree
                tested += 1
    assert tested >= 8


def test_criterion_12_full_claim_suite(capsys):
    with Clock() as clock:
        code = main(["verify-paper", "--no-timing"])
    out = capsys.readouterr().out
    assert code == 0, out
    assert clock.elapsed < 600.0
