"""Coordinate models of form bundles and multivector bundles.

A form bundle over R^m has coordinates (x^1..x^m, p_I) for admissible
multi-indices I; a q-multivector bundle over R^n has (x^1..x^n, u_J) for all
J of degree q.  Fiber coordinates follow the lexicographic order of I or J.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .canonical import HypothesisError, VerticalData, admissible_indices
from .exterior import FORM, VECTOR, AltElement, basis_indices, pullback
from .fields import (
    PolyAltField,
    contract,
    d,
    is_closed,
    lie_derivative,
    pullback_along,
    schouten,
)
from .linalg import LinearMap, PreconditionError, Subspace, unit
from .msym import MSpace, classify, isotropic_decomposition_check, orthogonal
from .poly import Poly
from .reduction import reduce, project_subspace


def _label(prefix: str, I: tuple) -> str:
    return prefix + "".join(str(i) for i in I) if I else prefix + "0"


def default_points(m: int) -> list[tuple]:
    """Origin, the unit points, the all-ones point and a mixed rational point."""
    pts = [tuple(Fraction(0) for _ in range(m))]
    pts += [tuple(Fraction(1 if j == i else 0) for j in range(m)) for i in range(m)]
    pts.append(tuple(Fraction(1) for _ in range(m)))
    mixed = [Fraction(1, 2), Fraction(-1, 3), Fraction(2), Fraction(3, 4), Fraction(-5, 2), Fraction(1, 5)]
    pts.append(tuple(mixed[i % len(mixed)] for i in range(m)))
    return pts


@dataclass(frozen=True)
class FormBundleSpace:
    m: int
    k: int
    e_axes: tuple          # 1-based coordinate axes spanning E
    r: int
    indices: tuple         # admissible I, lexicographic
    names: tuple
    theta: PolyAltField
    omega: PolyAltField

    @property
    def nvars(self) -> int:
        return self.m + len(self.indices)

    def fiber_axis(self, I: tuple) -> int:
        """1-based total-space axis of p_I."""
        return self.m + 1 + self.indices.index(tuple(I))

    def vertical(self) -> Subspace:
        n = self.nvars
        return Subspace.coordinate(n, range(self.m, n))

    def horizontal(self) -> Subspace:
        return Subspace.coordinate(self.nvars, range(self.m))

    def omega_at(self, point: Sequence) -> AltElement:
        return self.omega.at(point)

    def section_map(self, alpha: PolyAltField) -> list[Poly]:
        """x ↦ (x, α_I(x)) as a polynomial map R^m → total space."""
        check_admissible(self, alpha)
        m = self.m
        comps = [Poly.var(m, i) for i in range(m)]
        comps += [alpha.terms.get(I, Poly.zero(m)) for I in self.indices]
        return comps

    def graph_tangent(self, alpha: PolyAltField, x: Sequence) -> Subspace:
        m, n = self.m, self.nvars
        vecs = []
        for a in range(m):
            v = [Fraction(0)] * n
            v[a] = Fraction(1)
            for t, I in enumerate(self.indices):
                c = alpha.terms.get(I)
                if c is not None:
                    v[m + t] = c.diff(a).evaluate(x)
            vecs.append(v)
        return Subspace.span(vecs, n)

    def lift_point(self, alpha: PolyAltField, x: Sequence) -> tuple:
        return tuple(x) + tuple(
            alpha.terms[I].evaluate(x) if I in alpha.terms else Fraction(0) for I in self.indices
        )


def build_form_bundle(
    m: int, k: int, e_axes: Sequence[int] = (), r: int = 0, check: bool = True
) -> FormBundleSpace:
    """Λ^k_r over R^m with E spanned by the given coordinate axes; Θ = Σ p_I dx^I, Ω = -dΘ.

    ``check=False`` skips the dimension hypotheses on (E, r), which restricted
    bundles need not satisfy.
    """
    e_axes = tuple(sorted(set(e_axes)))
    if check:
        VerticalData.coordinate(m, e_axes, r).check(k)
    elif not 1 <= k <= m:
        raise HypothesisError(f"violated k ≤ dim L: k={k}, dim L={m}")
    idx = tuple(admissible_indices(m, k, e_axes, r if r <= len(e_axes) else 0))
    n = m + len(idx)
    names = tuple(f"x{i}" for i in range(1, m + 1)) + tuple(_label("p", I) for I in idx)
    theta = PolyAltField(n, k, {I: Poly.var(n, m + t) for t, I in enumerate(idx)}, FORM, names)
    return FormBundleSpace(m, k, e_axes, r, idx, names, theta, -d(theta))


def check_admissible(fb: FormBundleSpace, alpha: PolyAltField) -> None:
    if alpha.nvars != fb.m or alpha.degree != fb.k or alpha.variance != FORM:
        raise PreconditionError(f"expected a {fb.k}-form on R^{fb.m}")
    bad = [I for I in alpha.terms if I not in fb.indices]
    if bad:
        raise PreconditionError(f"α is not {fb.r}-vertical: components {bad} are not admissible")


def section_pullback_check(fb: FormBundleSpace, alpha: PolyAltField) -> dict:
    """α*Θ = α and α*Ω = -dα for the section x ↦ (x, α(x))."""
    F = fb.section_map(alpha)
    pt = pullback_along(F, fb.theta)
    po = pullback_along(F, fb.omega)
    return {
        "theta": pt == alpha,
        "omega": po == -d(alpha),
        "isotropic_iff_closed": po.is_zero() == is_closed(alpha),
        "ok": pt == alpha and po == -d(alpha),
    }


def closed_iff_lagrangian_check(fb: FormBundleSpace, alpha: PolyAltField, points=None) -> dict:
    """The graph of α is k-Lagrangian at x exactly when dα(x) = 0."""
    check_admissible(fb, alpha)
    points = points if points is not None else default_points(fb.m)
    da = d(alpha)
    closed = da.is_zero()
    per_point = []
    for x in points:
        ms = MSpace(fb.omega_at(fb.lift_point(alpha, x)))
        T = fb.graph_tangent(alpha, x)
        lag = classify(ms, T, fb.k).is_j_lagrangian
        per_point.append({"point": [str(c) for c in x], "lagrangian": lag, "d_alpha_zero": da.at(x).is_zero()})
    agree = all(p["lagrangian"] == p["d_alpha_zero"] for p in per_point)
    return {
        "closed": closed,
        "all_lagrangian": all(p["lagrangian"] for p in per_point),
        "points": per_point,
        "ok": agree and (not closed or all(p["lagrangian"] for p in per_point)),
    }


def vertical_isotropy_check(fb: FormBundleSpace, points=None) -> dict:
    """Fiber directions are 1-isotropic symbolically and 1-Lagrangian pointwise."""
    n, m = fb.nvars, fb.m
    sym_ok = True
    for s in range(m + 1, n + 1):
        for t in range(s + 1, n + 1):
            u = PolyAltField(n, 2, {(s, t): 1}, VECTOR)
            if not contract(u, fb.omega).is_zero():
                sym_ok = False
    pts = points if points is not None else [tuple([Fraction(0)] * n)]
    lag = []
    for p in pts:
        ms = MSpace(fb.omega_at(p))
        rep = isotropic_decomposition_check(ms, fb.horizontal(), fb.vertical())
        lag.append(rep.w_lagrangian and rep.u_lagrangian)
    return {"symbolic_isotropic": sym_ok, "pointwise_lagrangian": all(lag), "ok": sym_ok and all(lag)}


# multivector bundles -----------------------------------------------------

def _flat_map(omega: PolyAltField, q: int, s_indices: Sequence[tuple]) -> list[Poly]:
    """(x, u) ↦ (x, p_I = Σ_J u_J (ι_{∂_J} ω)_I(x)) on the q-multivector bundle."""
    n = omega.nvars
    J_idx = basis_indices(n, q)
    total = n + len(J_idx)
    xs = [Poly.var(total, i) for i in range(n)]
    comps = list(xs)
    contractions = [contract(PolyAltField.basis(n, J, VECTOR), omega) for J in J_idx]
    for I in s_indices:
        acc = Poly.zero(total)
        for t, c in enumerate(contractions):
            coef = c.terms.get(I)
            if coef is not None:
                acc = acc + coef.extend(total) * Poly.var(total, n + t)
        comps.append(acc)
    return comps


@dataclass(frozen=True)
class MultivectorBundleSpace:
    n: int
    k: int
    q: int
    omega: PolyAltField
    fiber: tuple            # J indices, lexicographic
    names: tuple
    flat_map: tuple         # polynomial bundle map into Λ^{k+1-q}
    target: FormBundleSpace
    omega_tilde: PolyAltField

    @property
    def nvars(self) -> int:
        return self.n + len(self.fiber)

    def vertical(self) -> Subspace:
        return Subspace.coordinate(self.nvars, range(self.n, self.nvars))

    def horizontal(self) -> Subspace:
        return Subspace.coordinate(self.nvars, range(self.n))

    def section_map(self, U: PolyAltField) -> list[Poly]:
        if U.nvars != self.n or U.degree != self.q or U.variance != VECTOR:
            raise PreconditionError(f"expected a {self.q}-vector field on R^{self.n}")
        comps = [Poly.var(self.n, i) for i in range(self.n)]
        comps += [U.terms.get(J, Poly.zero(self.n)) for J in self.fiber]
        return comps

    def graph_tangent(self, U: PolyAltField, x: Sequence) -> Subspace:
        n, N = self.n, self.nvars
        vecs = []
        for a in range(n):
            v = [Fraction(0)] * N
            v[a] = Fraction(1)
            for t, J in enumerate(self.fiber):
                c = U.terms.get(J)
                if c is not None:
                    v[n + t] = c.diff(a).evaluate(x)
            vecs.append(v)
        return Subspace.span(vecs, N)

    def lift_point(self, U: PolyAltField, x: Sequence) -> tuple:
        return tuple(x) + tuple(U.terms[J].evaluate(x) if J in U.terms else Fraction(0) for J in self.fiber)


def build_multivector_bundle(omega: PolyAltField, q: int) -> MultivectorBundleSpace:
    """(⋁_q M, Ω̃^q = ♭_q* Ω^{k+1-q}) for a closed (k+1)-form ω on R^n."""
    if not is_closed(omega):
        raise PreconditionError("ω is not closed")
    n = omega.nvars
    k = omega.degree - 1
    if not 1 <= q <= k:
        raise PreconditionError(f"q must lie in 1..{k}")
    s = k + 1 - q
    target = build_form_bundle(n, s)
    F = _flat_map(omega, q, target.indices)
    fiber = tuple(basis_indices(n, q))
    names = tuple(f"x{i}" for i in range(1, n + 1)) + tuple(_label("u", J) for J in fiber)
    ot = pullback_along(F, target.omega, names)
    return MultivectorBundleSpace(n, k, q, omega, fiber, names, tuple(F), target, ot)


def hamiltonian_iff_lagrangian_check(mb: MultivectorBundleSpace, U: PolyAltField, points=None) -> dict:
    """U*Ω̃ = -d ι_U ω, and the graph of U is (k+1-q)-Lagrangian at x iff d ι_U ω (x) = 0."""
    G = mb.section_map(U)
    pulled = pullback_along(G, mb.omega_tilde)
    dio = d(contract(U, mb.omega))
    identity = pulled == -dio
    points = points if points is not None else default_points(mb.n)
    j = mb.k + 1 - mb.q
    per_point = []
    for x in points:
        ms = MSpace(mb.omega_tilde.at(mb.lift_point(U, x)))
        T = mb.graph_tangent(U, x)
        lag = classify(ms, T, j).is_j_lagrangian
        per_point.append({"point": [str(c) for c in x], "lagrangian": lag, "closed_at_point": dio.at(x).is_zero()})
    agree = all(p["lagrangian"] == p["closed_at_point"] for p in per_point)
    return {
        "pullback_identity": identity,
        "locally_hamiltonian": dio.is_zero(),
        "points": per_point,
        "ok": identity and agree,
    }


def multivector_vertical_check(mb: MultivectorBundleSpace, points=None) -> dict:
    """W̃ is 1-isotropic for Ω̃ and the bundle map sends it into the target fibers."""
    N = mb.nvars
    sym_ok = True
    for s in range(mb.n + 1, N + 1):
        for t in range(s + 1, N + 1):
            u = PolyAltField(N, 2, {(s, t): 1}, VECTOR)
            if mb.omega_tilde.degree >= 2 and not contract(u, mb.omega_tilde).is_zero():
                sym_ok = False
    # base components of the bundle map do not depend on fiber coordinates
    intertwines = all(
        all(c.diff(v).is_zero() for v in range(mb.n, N)) for c in mb.flat_map[: mb.n]
    )
    return {"isotropic": sym_ok, "intertwines": intertwines, "ok": sym_ok and intertwines}


def complete_lift(omega: PolyAltField, q: int) -> PolyAltField:
    """ω^c_q = ♭̃_q* Θ^{k+2-q} + (-1)^q ♭_q* Ω^{k+1-q} on the q-multivector bundle.

    Here ♭̃_q(u) = ι_u dω.  Pulling back along any q-vector field U gives £_U ω.
    """
    n = omega.nvars
    k = omega.degree - 1
    if not 1 <= q <= k + 1:
        raise PreconditionError(f"q must lie in 1..{k + 1}")
    fiber = basis_indices(n, q)
    total = n + len(fiber)
    names = tuple(f"x{i}" for i in range(1, n + 1)) + tuple(_label("u", J) for J in fiber)
    out = PolyAltField.zero(total, k + 2 - q, FORM, names)
    dw = d(omega)
    s1 = k + 2 - q
    if s1 <= n and not dw.is_zero():
        tb = build_form_bundle(n, s1)
        F1 = _flat_map(dw, q, tb.indices)
        out = out + pullback_along(F1, tb.theta, names)
    s2 = k + 1 - q
    if s2 >= 1:
        fb = build_form_bundle(n, s2)
        F2 = _flat_map(omega, q, fb.indices)
        term = pullback_along(F2, fb.omega, names)
        out = out + (term if q % 2 == 0 else -term)
    else:
        # q = k+1: Ω^0 is not defined; ♭_q u = ι_u ω is a function and the
        # second term is -(-1)^q d of that function, pulled back.
        F2 = _flat_map(omega, q, [()])
        f = F2[n]
        term = d(PolyAltField.function(f, names))
        out = out + (-term if q % 2 == 0 else term)
    return out


def complete_lift_check(omega: PolyAltField, q: int, fields: Sequence[PolyAltField]) -> dict:
    lift = complete_lift(omega, q)
    n = omega.nvars
    fiber = basis_indices(n, q)
    res = []
    for U in fields:
        G = [Poly.var(n, i) for i in range(n)] + [U.terms.get(J, Poly.zero(n)) for J in fiber]
        res.append(pullback_along(G, lift) == lie_derivative(U, omega))
    out = {"lie_identity": res, "ok": all(res)}
    if is_closed(omega) and 1 <= q <= omega.degree - 1:
        mb = build_multivector_bundle(omega, q)
        sign = 1 if q % 2 == 0 else -1
        out["closed_sign_identity"] = lift == mb.omega_tilde.scale(sign)
        out["ok"] = out["ok"] and out["closed_sign_identity"]
    return out


# bundle-model reduction ------------------------------------------------------

@dataclass
class FiberReductionReport:
    kernel_rank: int
    expected_rank: int
    kernel_matches: bool
    reduced_form_matches: bool
    projection_is_graph: bool
    restricted_closed: bool
    projected_lagrangian: bool
    involutive: bool
    points: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.kernel_rank == self.expected_rank
            and self.kernel_matches
            and self.reduced_form_matches
            and self.projection_is_graph
            and self.restricted_closed
            and self.projected_lagrangian
            and self.involutive
        )


def restrict_to_axes(alpha: PolyAltField, q_axes: Sequence[int]) -> PolyAltField:
    """i*α for the coordinate subspace spanned by the given axes, in relabelled coordinates."""
    m = alpha.nvars
    q_axes = sorted(q_axes)
    s = len(q_axes)
    F = [Poly.var(s, q_axes.index(i)) if i in q_axes else Poly.zero(s) for i in range(1, m + 1)]
    return pullback_along(F, alpha)


def fiber_reduction_model(fb: FormBundleSpace, q_axes: Sequence[int], alpha: PolyAltField, points=None) -> FiberReductionReport:
    """Reduce N = Λ^k_r L|_Q pointwise and project the graph of a closed α.

    Q is spanned by the given base axes.  The quotient of TN is identified
    with the tangent space of Λ^k_r Q by keeping the Q axes and the p_I with
    I ⊆ Q.
    """
    check_admissible(fb, alpha)
    if not is_closed(alpha):
        raise PreconditionError("α is not closed")
    m, k, n = fb.m, fb.k, fb.nvars
    q_axes = sorted(set(q_axes))
    qs = set(q_axes)
    relabel = {a: i + 1 for i, a in enumerate(q_axes)}
    e_q = [relabel[a] for a in fb.e_axes if a in qs]
    fq = build_form_bundle(len(q_axes), k, e_q, fb.r, check=False)
    inside = [I for I in fb.indices if set(I) <= qs]
    outside = [I for I in fb.indices if not set(I) <= qs]
    # admissible indices on Q correspond to admissible I ⊆ Q
    if sorted(tuple(relabel[i] for i in I) for I in inside) != sorted(fq.indices):
        raise AssertionError("admissible indices on Q do not match index restriction")
    expected_rank = len(fb.indices) - len(fq.indices)

    TN = Subspace.coordinate(n, [a - 1 for a in q_axes] + list(range(m, n)))
    ker_expected = Subspace.coordinate(n, [fb.fiber_axis(I) - 1 for I in outside])
    ia = restrict_to_axes(alpha, q_axes)
    restricted_closed = is_closed(ia)

    # identification: total-space axis -> Q-bundle axis
    axis_map = {a: relabel[a] for a in q_axes}
    for I in inside:
        J = tuple(relabel[i] for i in I)
        axis_map[fb.fiber_axis(I)] = fq.fiber_axis(J)

    pts = points if points is not None else [
        p for p in default_points(m) if all(p[a - 1] == 0 for a in range(1, m + 1) if a not in qs)
    ]
    if not pts:
        pts = [tuple([Fraction(0)] * m)]
    kernel_rank = None
    kernel_ok = form_ok = graph_ok = lag_ok = True
    records = []
    for x in pts:
        y = fb.lift_point(alpha, x)
        ms = MSpace(fb.omega_at(y))
        K = TN & orthogonal(ms, TN, k)
        kernel_rank = K.dim
        kernel_ok &= K == ker_expected
        red = reduce(ms, TN)
        # quotient coordinate i <-> ambient axis of its section representative
        quot_axes = []
        for i in range(red.dim):
            v = red.lift(unit(red.dim, i))
            nz = [j for j, c in enumerate(v) if c]
            if len(nz) != 1 or v[nz[0]] != 1:
                raise AssertionError("quotient coordinates are not coordinate axes")
            quot_axes.append(nz[0] + 1)
        ident = LinearMap.from_columns(
            [unit(fq.nvars, axis_map[a] - 1) for a in quot_axes], fq.nvars
        )
        xq = tuple(x[a - 1] for a in q_axes)
        yq = fq.lift_point(ia, xq)
        form_ok &= pullback(ident, fq.omega_at(yq)) == red.omega_N
        T = fb.graph_tangent(alpha, x)
        proj = project_subspace(red, T)
        proj_q = proj.image(ident)
        graph_q = fq.graph_tangent(ia, xq)
        graph_ok &= proj_q == graph_q
        lag = classify(MSpace(fq.omega_at(yq)), graph_q, k).is_j_lagrangian
        lag_ok &= lag
        records.append({"point": [str(c) for c in x], "kernel_rank": K.dim, "lagrangian": lag})

    # fiber directions outside Q commute: the distribution is involutive
    invol = True
    for I in outside:
        for J in outside:
            a = PolyAltField.basis(n, (fb.fiber_axis(I),), VECTOR)
            b = PolyAltField.basis(n, (fb.fiber_axis(J),), VECTOR)
            br = schouten(a, b)
            if any(key[0] not in {fb.fiber_axis(K) for K in outside} for key in br.terms):
                invol = False
    return FiberReductionReport(
        kernel_rank=kernel_rank,
        expected_rank=expected_rank,
        kernel_matches=kernel_ok,
        reduced_form_matches=form_ok,
        projection_is_graph=graph_ok,
        restricted_closed=restricted_closed,
        projected_lagrangian=lag_ok,
        involutive=invol,
        points=records,
    )
