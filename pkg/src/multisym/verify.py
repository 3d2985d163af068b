"""The claim suite behind ``multisym verify-paper``.

Every claim is a function returning ``(passed, witness)``; the report lists
claims sorted by id, each with a short statement label.
"""
from __future__ import annotations

import itertools
import random
import re
import time
from dataclasses import dataclass, field
from typing import Callable

from .bundles import (
    build_form_bundle,
    build_multivector_bundle,
    closed_iff_lagrangian_check,
    complete_lift_check,
    fiber_reduction_model,
    hamiltonian_iff_lagrangian_check,
    multivector_vertical_check,
    section_pullback_check,
    vertical_isotropy_check,
)
from .canonical import (
    VerticalData,
    admissible_tuples,
    build_canonical,
    conjugate,
    flat_image_lemma_check,
    flat_image_lemma_check_model,
    lagrangian_complement,
    type_kr_witness,
)
from .exterior import FORM, VECTOR, basis_indices
from .fields import (
    PolyAltField,
    bracket_identity_residual,
    d,
    parse_field,
    random_field,
    random_poly,
    solve_constant_flat,
)
from .hamiltonian import (
    conserved_quantity_check,
    coisotropic_subalgebra_check,
    graded_identities_check,
    hamiltonian_class,
)
from .linalg import Subspace
from .msym import (
    MSpace,
    classify,
    is_k_isotropic_via_pullback,
    isotropic_decomposition_check,
    orthogonal,
    orthogonal_properties_check,
)
from .poly import Poly
from .reduction import coisotropic_ideal_check, counterexample, lagrangian_projection_test, reduce
from .sampling import hamiltonian_field, hamiltonian_random_class, random_invertible, random_subspace


@dataclass(frozen=True)
class Options:
    seed: int = 0
    max_poly_degree: int = 3


@dataclass(frozen=True)
class Claim:
    claim_id: str
    anchor: str
    run: Callable[[Options], tuple]


@dataclass
class ClaimResult:
    claim_id: str
    paper_anchor: str
    status: str                 # pass | fail | skipped
    witness: dict
    wall_time: float

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "claim_id": self.claim_id,
            "paper_anchor": self.paper_anchor,
            "status": self.status,
            "witness": self.witness,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out


@dataclass
class VerificationReport:
    entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.status != "fail" for e in self.entries)

    def to_json(self, timing: bool = True) -> list:
        return [e.to_json(timing) for e in self.entries]

    def table(self) -> str:
        if not self.entries:
            return "no claims selected"
        w = max(len(e.claim_id) for e in self.entries)
        lines = [f"{'claim':<{w}}  status   time(s)  statement"]
        for e in self.entries:
            lines.append(f"{e.claim_id:<{w}}  {e.status:<7}  {e.wall_time:7.2f}  {e.paper_anchor}")
        npass = sum(e.status == "pass" for e in self.entries)
        nfail = sum(e.status == "fail" for e in self.entries)
        lines.append(f"{npass} passed, {nfail} failed, {len(self.entries) - npass - nfail} skipped")
        return "\n".join(lines)


def _q(v) -> list[str]:
    return [str(c) for c in v]


# sample models -----------------------------------------------------------

def _sample_spaces() -> list[tuple[str, MSpace]]:
    from .exterior import AltElement

    ce = counterexample()
    out = [("counterexample", ce["ms"])]
    out.append(("canonical_m3_k1", build_canonical(VerticalData.build(3), 1).ms))
    out.append(("canonical_m3_k2_r1", build_canonical(VerticalData.coordinate(3, (3,), 1), 2).ms))
    vol4 = AltElement(4, 4, {(1, 2, 3, 4): 1})
    out.append(("volume_r4", MSpace(vol4)))
    deg = AltElement(5, 3, {(1, 2, 3): 1, (1, 4, 5): 2})
    out.append(("degenerate_r5", MSpace(deg)))
    return out


# counterexample ----------------------------------------------------------

def _ce_coisotropic(opts):
    ce = counterexample()
    cls = classify(ce["ms"], ce["N"], 2)
    return cls.is_j_coisotropic, {"dim_N": ce["N"].dim, "coisotropic": cls.is_j_coisotropic}


def _ce_zero_orthogonal(opts):
    ce = counterexample()
    perp = orthogonal(ce["ms"], ce["N"], 2)
    return perp.dim == 0, {"orthogonal_dim": perp.dim}


def _ce_projection(opts):
    ce = counterexample()
    ms, N, L, LN = ce["ms"], ce["N"], ce["L"], ce["LN"]
    red = reduce(ms, N)
    rep = lagrangian_projection_test(red, L, 2)
    wit = ce["witness"]
    perp_LN = orthogonal(ms, LN, 2)
    ok = (
        (L & N) == LN
        and not rep.is_lagrangian
        and rep.witness is not None
        and tuple(rep.witness) == wit
        and perp_LN.contains(wit)
        and not LN.contains(wit)
    )
    return ok, {
        "L_cap_N": [_q(b) for b in (L & N).basis],
        "projected_lagrangian": rep.is_lagrangian,
        "witness": _q(rep.witness) if rep.witness is not None else None,
        "quotient_dim": red.dim,
    }


# multisymplectic linear algebra -------------------------------------------

def _orthogonal_properties(opts):
    rng = random.Random(opts.seed)
    failures = []
    total = 0
    for name, ms in _sample_spaces():
        for _ in range(100):
            W1 = random_subspace(ms.n, rng)
            W2 = random_subspace(ms.n, rng)
            j = rng.randint(1, ms.k)
            rep = orthogonal_properties_check(ms, W1, W2, j)
            total += 1
            bad = [c for c, v in rep.items() if not v]
            if bad:
                failures.append({"model": name, "j": j, "clauses": bad})
    return not failures, {"pairs": total, "failures": failures[:5]}


def _isotropic_decomposition(opts):
    bad = []
    count = 0
    for m, k, r, e in admissible_tuples(4, 3, (0, 2, 3)):
        model = build_canonical(VerticalData.coordinate(m, range(m - e + 1, m + 1), r), k)
        rep = isotropic_decomposition_check(model.ms, model.L, model.W)
        count += 1
        if not rep.ok:
            bad.append([m, k, r, e])
    return not bad, {"models": count, "failures": bad}


def _canonical_lagrangian(opts):
    bad = []
    count = 0
    for m, k, r, e in admissible_tuples(5, 3, (0, 2, 3)):
        model = build_canonical(VerticalData.coordinate(m, range(m - e + 1, m + 1), r), k)
        count += 1
        if not classify(model.ms, model.L, k).is_j_lagrangian or not classify(model.ms, model.W, 1).is_j_lagrangian:
            bad.append([m, k, r, e])
    return not bad, {"models": count, "failures": bad}


def _canonical_kernel_r1(opts):
    bad = []
    count = 0
    for m, k, r, e in admissible_tuples(5, 3, (1,)):
        model = build_canonical(VerticalData.coordinate(m, range(m - e + 1, m + 1), r), k)
        count += 1
        if model.ms.kernel_flat1() != model.E:
            bad.append([m, k, r, e])
    return not bad, {"models": count, "failures": bad}


def _type_kr(opts):
    rng = random.Random(opts.seed + 1)
    tuples = [t for t in admissible_tuples(4, 3, (0, 2, 3)) if t[0] >= 2]
    bad = []
    n_ok = 0
    for i in range(25):
        m, k, r, e = tuples[rng.randrange(len(tuples))]
        model = build_canonical(VerticalData.coordinate(m, range(m - e + 1, m + 1), r), k)
        G = random_invertible(model.n, rng)
        ms, W, E = conjugate(model, G)
        U = lagrangian_complement(ms, W, E, r)
        wit = type_kr_witness(ms, W, E, r)
        ok = is_k_isotropic_via_pullback(ms, U) and U.is_complement(W) and wit.roundtrip
        if ok:
            n_ok += 1
        else:
            bad.append([m, k, r, e])
    return not bad, {"conjugates": 25, "roundtrips": n_ok, "failures": bad}


def _flat_image(opts):
    rng = random.Random(opts.seed + 2)
    count = 0
    missing = []
    for m, k, r, e in admissible_tuples(4, 3, (0, 2, 3)):
        model = build_canonical(VerticalData.coordinate(m, range(m - e + 1, m + 1), r), k)
        rep = flat_image_lemma_check_model(model)
        count += len(rep.forms)
        if not rep.ok:
            missing.append([m, k, r, e])
    # a few conjugated models with non-coordinate E
    for _ in range(6):
        model = build_canonical(VerticalData.coordinate(4, (3, 4), 2), 2)
        G = random_invertible(model.n, rng)
        ms, W, E = conjugate(model, G)
        rep = flat_image_lemma_check(ms, W, E, 2)
        count += len(rep.forms)
        if not rep.ok:
            missing.append("conjugate")
    return not missing, {"forms": count, "failures": missing}


def _coisotropic_ideal(opts):
    results = []
    ce = counterexample()
    results.append(coisotropic_ideal_check(ce["ms"], ce["N"], seed=opts.seed))
    model = build_canonical(VerticalData.coordinate(3, (2, 3), 2), 2)
    results.append(coisotropic_ideal_check(model.ms, model.W + model.L, seed=opts.seed))
    N = model.W + Subspace.span([model.L.basis[0], model.L.basis[1]], model.n)
    if classify(model.ms, N, 2).is_j_coisotropic:
        results.append(coisotropic_ideal_check(model.ms, N, seed=opts.seed))
    ok = all(r["ok"] for r in results)
    return ok, {"subspaces": len(results), "checked": sum(r["checked"] for r in results)}


# brackets ------------------------------------------------------------------

def _schouten_identity(opts):
    rng = random.Random(opts.seed + 3)
    omega = parse_field("dx1^dx2^dx3^dx4", 4)
    deg = min(opts.max_poly_degree, 3)
    checked = 0
    vacuous = 0
    failures = []
    per_pair = {}
    for p, q in itertools.product((1, 2, 3), repeat=2):
        for _ in range(8):
            U, _g = hamiltonian_field(omega, p, rng, deg)
            V, _g = hamiltonian_field(omega, q, rng, deg)
            res = bracket_identity_residual(U, V, omega)
            if res is None:
                vacuous += 1
                continue
            checked += 1
            per_pair[f"{p},{q}"] = per_pair.get(f"{p},{q}", 0) + 1
            if not res.is_zero():
                failures.append([p, q])
    ok = not failures and checked >= 50
    return ok, {"checked": checked, "vacuous": vacuous, "per_degree_pair": per_pair, "failures": failures}


def _graded_lie(opts):
    rng = random.Random(opts.seed + 4)
    anti = jac = 0
    failures = []
    for text, n in (("dx1^dx2^dx3", 3), ("dx1^dx2^dx3^dx4", 4)):
        omega = parse_field(text, n)
        k = omega.degree - 1
        patterns = list(itertools.product(range(1, k + 1), repeat=3))
        triples = []
        for i in range(12):
            qs = patterns[i % len(patterns)]
            triples.append(tuple(hamiltonian_random_class(omega, q, rng, 2) for q in qs))
        rep = graded_identities_check(omega, triples)
        anti += len(rep.antisymmetry)
        jac += len(rep.jacobi)
        if not rep.ok:
            failures.append(text)
    return not failures, {"triples": 24, "antisymmetry_checks": anti, "jacobi_checks": jac, "failures": failures}


def _sliced_class(omega, rng, fixed_axis):
    """Hamiltonian (k-1)-form x^a·β, closed on {x^a = 0}, with its witness."""
    n = omega.nvars
    k = omega.degree - 1
    xa = Poly.var(n, fixed_axis - 1)
    for _ in range(200):
        beta = random_field(n, k - 1, FORM, 1, rng)
        alpha = beta.map_coefficients(lambda c: c * xa)
        U = solve_constant_flat(omega, d(alpha), 1)
        if U is not None and not alpha.is_zero():
            return hamiltonian_class(alpha, omega, U)
    raise RuntimeError("no sliced Hamiltonian form found")


def _coisotropic_subalgebra(opts):
    rng = random.Random(opts.seed + 5)
    reports = []
    for text, n in (("dx1^dx2^dx3", 3), ("dx1^dx2^dx3^dx4", 4)):
        omega = parse_field(text, n)
        pairs = [(_sliced_class(omega, rng, n), _sliced_class(omega, rng, n)) for _ in range(5)]
        reports.append(coisotropic_subalgebra_check(omega, [n], pairs))
    ok = all(r.ok for r in reports)
    return ok, {"pairs": sum(r.pairs for r in reports), "witnesses_adjusted": sum(r.adjusted for r in reports)}


def _conserved(opts):
    rng = random.Random(opts.seed + 6)
    total = agree = conserved = 0
    bad = []
    cases = []
    for text, n in (("dx1^dx2^dx3", 3), ("dx1^dx2^dx3^dx4", 4)):
        omega = parse_field(text, n)
        k = omega.degree - 1
        for q in range(2, k + 1):
            for _ in range(5):
                cases.append((omega, q, "random"))
        for q in range(2, k + 1):
            for _ in range(2):
                cases.append((omega, q, "exact"))
    for omega, q, kind in cases:
        k = omega.degree - 1
        X, H = hamiltonian_field(omega, q, rng, 2)
        if kind == "exact":
            alpha = d(random_field(omega.nvars, q - 2, FORM, 3, rng))
        else:
            alpha = random_field(omega.nvars, q - 1, FORM, 2, rng)
        Ua = solve_constant_flat(omega, d(alpha), k - q + 1)
        rep = conserved_quantity_check(X, H, alpha, omega, Ua)
        if rep.agree is None:
            continue
        total += 1
        agree += rep.agree
        conserved += rep.conserved
        if not rep.agree:
            bad.append(str(rep.pairing))
    return not bad and total > 0, {"pairs": total, "agree": agree, "conserved": conserved, "failures": bad}


# bundles -------------------------------------------------------------------

BUNDLE_CASES = [
    (3, 1, (), 0),
    (3, 2, (), 0),
    (3, 2, (2, 3), 2),
    (4, 2, (), 0),
    (4, 2, (3, 4), 2),
    (4, 3, (3, 4), 2),
]


def closed_admissible_form(fb, rng: random.Random, max_degree: int, terms: int = 2) -> PolyAltField:
    """d(Σ f dx^J) with J carrying at most r-1 E axes and f free of E variables."""
    m, k = fb.m, fb.k
    e = set(fb.e_axes) if fb.r else set()
    free = [i for i in range(1, m + 1) if i not in e]
    Js = [J for J in basis_indices(m, k - 1) if not fb.r or sum(1 for i in J if i in e) <= fb.r - 1]
    out = PolyAltField.zero(m, k)
    for _ in range(terms):
        J = Js[rng.randrange(len(Js))]
        f = random_poly(len(free), max_degree, rng)
        f = f.substitute([Poly.var(m, i - 1) for i in free]) if free else Poly.zero(m)
        out = out + d(PolyAltField(m, k - 1, {J: f}))
    return out


def random_admissible_form(fb, rng: random.Random, max_degree: int) -> PolyAltField:
    terms = {I: random_poly(fb.m, max_degree, rng) for I in fb.indices if rng.random() < 0.6}
    return PolyAltField(fb.m, fb.k, terms)


def _section_pullback(opts):
    rng = random.Random(opts.seed + 7)
    count = 0
    bad = []
    for case in BUNDLE_CASES:
        fb = build_form_bundle(*case)
        for alpha in (random_admissible_form(fb, rng, 2), closed_admissible_form(fb, rng, 3)):
            count += 1
            if not section_pullback_check(fb, alpha)["ok"]:
                bad.append(list(case[:2]))
    return not bad, {"sections": count, "failures": bad}


def _closed_iff_lagrangian(opts):
    rng = random.Random(opts.seed + 8)
    count = closed = 0
    bad = []
    for case in BUNDLE_CASES:
        fb = build_form_bundle(*case)
        for alpha in (random_admissible_form(fb, rng, 2), closed_admissible_form(fb, rng, 3)):
            rep = closed_iff_lagrangian_check(fb, alpha)
            count += 1
            closed += rep["closed"]
            if not rep["ok"]:
                bad.append(list(case[:2]))
    return not bad, {"sections": count, "closed": closed, "failures": bad}


def _vertical_isotropy(opts):
    bad = [list(c[:2]) for c in BUNDLE_CASES if not vertical_isotropy_check(build_form_bundle(*c))["ok"]]
    return not bad, {"bundles": len(BUNDLE_CASES), "failures": bad}


def _hamiltonian_iff_lagrangian(opts):
    rng = random.Random(opts.seed + 9)
    omegas = [
        parse_field("dx1^dx2^dx3", 3),
        d(parse_field("x1 x2 dx3^dx4 + x3^2 dx1^dx2", 4)),
        parse_field("dx1^dx2^dx3^dx4", 4),
        parse_field("dx1^dx2^dx3 + dx1^dx2^dx4 + dx2^dx3^dx4", 4),
    ]
    count = ham = 0
    bad = []
    for omega in omegas:
        k = omega.degree - 1
        for q in (1, 2):
            if q > k:
                continue
            mb = build_multivector_bundle(omega, q)
            fields = [random_field(omega.nvars, q, VECTOR, 2, rng) for _ in range(2)]
            if all(c.is_constant() for c in omega.terms.values()):
                try:
                    fields.append(hamiltonian_field(omega, q, rng, 2)[0])
                except RuntimeError:
                    pass
            fields.append(PolyAltField.basis(omega.nvars, tuple(range(1, q + 1)), VECTOR))
            for U in fields:
                rep = hamiltonian_iff_lagrangian_check(mb, U)
                count += 1
                ham += rep["locally_hamiltonian"]
                if not rep["ok"]:
                    bad.append([omega.nvars, q])
            if not multivector_vertical_check(mb)["ok"]:
                bad.append([omega.nvars, q, "vertical"])
    return not bad, {"fields": count, "locally_hamiltonian": ham, "failures": bad}


def _complete_lift(opts):
    rng = random.Random(opts.seed + 10)
    nonclosed = [
        parse_field("x1 x2 dx1^dx3^dx4 + x3 dx2^dx3^dx4", 4),
        parse_field("x2 dx1^dx3 + x1^2 dx2^dx3", 3),
        parse_field("x3 x1 dx1^dx2", 3),
    ]
    closed = [parse_field("dx1^dx2^dx3", 3), d(parse_field("x1 x2 dx3^dx4 + x3^2 dx1^dx2", 4))]
    pairs = 0
    bad = []
    sign_checks = 0
    for omega in nonclosed:
        if d(omega).is_zero():
            bad.append("closed sample")
        for q in range(1, omega.degree + 1):
            fields = [random_field(omega.nvars, q, VECTOR, 2, rng) for _ in range(3)]
            rep = complete_lift_check(omega, q, fields)
            pairs += len(fields)
            if not rep["ok"]:
                bad.append([omega.nvars, q])
    for omega in closed:
        for q in range(1, omega.degree):
            fields = [random_field(omega.nvars, q, VECTOR, 2, rng) for _ in range(2)]
            rep = complete_lift_check(omega, q, fields)
            sign_checks += 1
            if not rep["ok"] or not rep.get("closed_sign_identity"):
                bad.append([omega.nvars, q, "closed"])
    return not bad and pairs >= 20, {"nonclosed_pairs": pairs, "closed_sign_checks": sign_checks, "failures": bad}


FIBER_CASES = [
    (3, 2, (), 0, (1, 2)),
    (3, 1, (), 0, (1, 2)),
    (4, 2, (), 0, (1, 3)),
    (4, 2, (3, 4), 2, (1, 2, 4)),
    (4, 3, (3, 4), 2, (1, 2, 4)),
    (4, 2, (3, 4), 2, (1, 2, 3)),
]


def _fiber_reduction(opts):
    rng = random.Random(opts.seed + 11)
    count = 0
    bad = []
    ranks = []
    for m, k, e, r, Q in FIBER_CASES:
        fb = build_form_bundle(m, k, e, r)
        for alpha in (closed_admissible_form(fb, rng, 2), PolyAltField.zero(m, k)):
            rep = fiber_reduction_model(fb, Q, alpha)
            count += 1
            if not rep.ok:
                bad.append([m, k, r, list(Q)])
        ranks.append([m, k, r, rep.kernel_rank, rep.expected_rank])
    return not bad, {"reductions": count, "ranks": ranks, "failures": bad}


CLAIMS = [
    Claim("brackets.coisotropic_subalgebra", "brackets of classes closed on a coisotropic slice stay closed on it", _coisotropic_subalgebra),
    Claim("brackets.conserved_quantities", "⟨dα, X_H⟩ = 0 iff the graded bracket of α and H vanishes", _conserved),
    Claim("brackets.graded_lie_algebra", "graded antisymmetry and graded Jacobi for the sign-adjusted bracket", _graded_lie),
    Claim("brackets.schouten_identity", "ι_[U,V] ω = -d ι_(U∧V) ω for locally Hamiltonian U, V", _schouten_identity),
    Claim("bundles.closed_iff_lagrangian", "the graph of an admissible form is k-Lagrangian iff the form is closed", _closed_iff_lagrangian),
    Claim("bundles.complete_lift", "U*ω^c = £_U ω, and ω^c = (-1)^q Ω̃ for closed ω", _complete_lift),
    Claim("bundles.fiber_reduction", "reducing Λ^k_r L over Q yields Λ^k_r Q and graphs of restricted forms", _fiber_reduction),
    Claim("bundles.hamiltonian_iff_lagrangian", "U*Ω̃ = -d ι_U ω; graphs are Lagrangian iff U is locally Hamiltonian", _hamiltonian_iff_lagrangian),
    Claim("bundles.section_pullback", "sections pull Θ back to α and Ω back to -dα", _section_pullback),
    Claim("bundles.vertical_isotropy", "fiber directions of the form bundle are 1-Lagrangian", _vertical_isotropy),
    Claim("canonical.flat_image", "k-forms vanishing on W and r-vertical on E lie in the image of ♭₁", _flat_image),
    Claim("canonical.kernel_r1", "for r = 1 the kernel of ♭₁ is exactly E", _canonical_kernel_r1),
    Claim("canonical.lagrangian", "in L ⊕ Λ^k_r L*, L is k-Lagrangian and the fiber is 1-Lagrangian", _canonical_lagrangian),
    Claim("canonical.type_kr_roundtrip", "type (k, r) data completes to a multisymplectomorphism onto the model", _type_kr),
    Claim("counterexample.coisotropic", "N is 2-coisotropic in the six-dimensional example", _ce_coisotropic),
    Claim("counterexample.projection_not_lagrangian", "π(L ∩ N) is not 2-Lagrangian; witness a12", _ce_projection),
    Claim("counterexample.zero_orthogonal", "N^⊥2 = 0 in the six-dimensional example", _ce_zero_orthogonal),
    Claim("msym.isotropic_decomposition", "V = U ⊕ W with U k-isotropic, W 1-isotropic forces both Lagrangian", _isotropic_decomposition),
    Claim("msym.orthogonal_properties", "inclusions (a)-(e) between j-th orthogonals", _orthogonal_properties),
    Claim("reduction.coisotropic_ideal", "i*(ι_(v∧w) ω) = 0 for v in N^⊥k, w in N", _coisotropic_ideal),
]


def claim_ids() -> list[str]:
    return sorted(c.claim_id for c in CLAIMS)


def run_claims(scope: str | None = None, opts: Options | None = None) -> VerificationReport:
    """Run every claim whose id matches ``scope`` (a regular expression)."""
    opts = opts or Options()
    pattern = re.compile(scope) if scope else None
    report = VerificationReport()
    for claim in sorted(CLAIMS, key=lambda c: c.claim_id):
        if pattern is not None and not pattern.search(claim.claim_id):
            continue
        t0 = time.perf_counter()
        try:
            passed, witness = claim.run(opts)
            status = "pass" if passed else "fail"
        except Exception as exc:  # a crashing claim is a failed claim
            status, witness = "fail", {"error": f"{type(exc).__name__}: {exc}"}
        report.entries.append(
            ClaimResult(claim.claim_id, claim.anchor, status, witness, time.perf_counter() - t0)
        )
    return report
