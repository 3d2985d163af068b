"""Canonical models L ⊕ Λ^k_r L* and the constructive type-(k, r) machinery."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

from .exterior import (
    FORM,
    AltElement,
    basis_indices,
    contract,
    decomposable,
    index_position,
    pullback,
    wedge,
    wedge_all,
)
from .linalg import (
    LinearMap,
    PreconditionError,
    Subspace,
    direct_sum_projections,
    nullspace,
    solve,
    transpose,
    unit,
)
from .msym import MSpace, classify, is_k_isotropic_via_pullback

log = logging.getLogger(__name__)


class HypothesisError(PreconditionError):
    """The (k, r) hypotheses on a vertical subspace are violated."""


def vertical_dimension(m: int, e: int, k: int, r: int) -> int:
    """dim Λ^k_r L* for dim L = m, dim E = e."""
    if r == 0 or r > e:
        return comb(m, k) if 0 <= k <= m else 0
    return sum(comb(e, j) * comb(m - e, k - j) for j in range(r) if 0 <= k - j <= m - e)


def admissible_indices(m: int, k: int, e_axes: Sequence[int], r: int) -> list[tuple]:
    """Degree-k multi-indices with at most r-1 entries among the E axes (1-based)."""
    idx = basis_indices(m, k)
    if r == 0:
        return idx
    ea = set(e_axes)
    return [I for I in idx if sum(1 for i in I if i in ea) <= r - 1]


@dataclass(frozen=True)
class VerticalData:
    """Base dimension m, vertical subspace E ⊆ Q^m and vanishing order r (0: none)."""

    m: int
    E: Subspace
    r: int = 0

    @classmethod
    def build(cls, m: int, E: Subspace | Sequence[Sequence] | None = None, r: int = 0) -> "VerticalData":
        if E is None:
            E = Subspace.zero(m)
        elif not isinstance(E, Subspace):
            E = Subspace.span(E, m)
        return cls(m, E, r)

    @classmethod
    def coordinate(cls, m: int, e_axes: Sequence[int], r: int) -> "VerticalData":
        """E spanned by the given 1-based coordinate axes."""
        return cls(m, Subspace.coordinate(m, [a - 1 for a in e_axes]), r)

    @property
    def e(self) -> int:
        return self.E.dim

    def check(self, k: int) -> None:
        if self.E.n != self.m:
            raise HypothesisError(f"E lives in Q^{self.E.n}, expected Q^{self.m}")
        if not 1 <= k <= self.m:
            raise HypothesisError(f"violated k ≤ dim L: k={k}, dim L={self.m}")
        if self.r < 0:
            raise HypothesisError("r must be non-negative")
        if self.r == 0:
            return
        if self.r > self.e:
            raise HypothesisError(f"violated r ≤ dim E: r={self.r}, dim E={self.e} (use r=0)")
        if k - self.r + 1 > self.m - self.e:
            raise HypothesisError(
                f"violated k - r + 1 ≤ codim E: {k - self.r + 1} > {self.m - self.e}"
            )

    @property
    def regular(self) -> bool:
        return self.r != 1


def adapted_basis(E: Subspace) -> tuple[LinearMap, list[int]]:
    """Basis change of Q^m making E a coordinate subspace.

    Returns the matrix whose columns are the new basis vectors, and the
    1-based axes spanning E in the new basis.  Coordinate subspaces keep
    the identity basis.
    """
    m = E.n
    units = [unit(m, i) for i in range(m)]
    if all(b in units for b in E.basis):
        return LinearMap.identity(m), [E.pivots[i] + 1 for i in range(E.dim)]
    comp = E.complement()
    cols = list(comp.basis) + list(E.basis)
    return LinearMap.from_columns(cols, m), list(range(comp.dim + 1, m + 1))


def vertical_forms_basis(E: Subspace, r: int, k: int) -> tuple[list[tuple], list[AltElement], LinearMap]:
    """Combinatorial basis of Λ^k_r L* in the original coordinates of L = Q^m.

    Returns the admissible adapted multi-indices, the corresponding basis
    k-forms, and the adapting basis change.
    """
    m = E.n
    B, e_axes = adapted_basis(E)
    if r > E.dim:
        r = 0
    idx = admissible_indices(m, k, e_axes, r)
    if B.matrix == LinearMap.identity(m).matrix:
        forms = [AltElement.basis(m, I) for I in idx]
        return idx, forms, B
    dual = B.inverse().matrix  # rows are the dual basis 1-forms
    ones = [AltElement.from_vector(row, FORM) for row in dual]
    forms = [wedge_all([ones[i - 1] for i in I]) if I else AltElement.scalar(m, 1) for I in idx]
    return idx, forms, B


def _form_operator(u: AltElement, n: int, p: int) -> list[tuple]:
    """Matrix of α ↦ ι_u α on Λ^p (Q^n)* in lexicographic bases."""
    rows_pos = index_position(n, p - u.degree)
    cols = basis_indices(n, p)
    mat = [[Fraction(0)] * len(cols) for _ in rows_pos]
    for j, I in enumerate(cols):
        img = contract(u, AltElement.basis(n, I))
        for key, v in img.terms.items():
            mat[rows_pos[key]][j] = v
    return [tuple(r) for r in mat]


def vertical_forms_kernel(E: Subspace, r: int, k: int) -> Subspace:
    """Λ^k_r L* as the kernel of the stacked r-fold contraction system over Λ^r E."""
    m = E.n
    size = comb(m, k)
    if r == 0 or r > E.dim or r > k:
        return Subspace.full(size)
    rows: list[tuple] = []
    for combo in combinations(E.basis, r):
        rows.extend(_form_operator(decomposable(combo), m, k))
    return Subspace.span(nullspace(rows, size), size)


def vertical_forms_subspace(E: Subspace, r: int, k: int, method: str = "combinatorial") -> Subspace:
    """Λ^k_r L* ⊆ Λ^k L*, as a subspace of the coefficient space Q^{C(m,k)}."""
    if method == "kernel":
        return vertical_forms_kernel(E, r, k)
    if method != "combinatorial":
        raise ValueError(f"unknown method {method!r}")
    _, forms, _ = vertical_forms_basis(E, r, k)
    return Subspace.span([f.coefficients() for f in forms], comb(E.n, k))


def _lift(form: AltElement, n: int) -> AltElement:
    """Pull a form on the first coordinates back to Q^n along the coordinate projection."""
    return AltElement._raw(n, form.degree, dict(form.terms), form.variance)


@dataclass(frozen=True)
class CanonicalModel:
    vd: VerticalData
    k: int
    indices: tuple          # admissible multi-indices (adapted coordinates)
    forms: tuple            # basis of Λ^k_r L* as forms on Q^m
    n: int
    omega: AltElement
    L: Subspace
    W: Subspace
    basis_change: LinearMap

    @property
    def m(self) -> int:
        return self.vd.m

    @property
    def ms(self) -> MSpace:
        return MSpace(self.omega)

    @property
    def E(self) -> Subspace:
        """E embedded in V = L ⊕ W."""
        return Subspace.span([tuple(b) + (Fraction(0),) * (self.n - self.m) for b in self.vd.E.basis], self.n)

    def fiber_label(self, t: int) -> str:
        return "a" + "".join(str(i) for i in self.indices[t])


def build_canonical(vd: VerticalData, k: int) -> CanonicalModel:
    """(L ⊕ Λ^k_r L*, Ω_L) with Ω_L = Σ_t w^t ∧ φ_t (signed convention).

    Here φ_t runs over the basis of Λ^k_r L* and w^t is the dual coordinate
    of the t-th fiber axis, so Ω_L((v_1,a_1), …) = Σ_j (-1)^{j+1} a_j(v_1, …, v̂_j, …).
    """
    vd.check(k)
    m = vd.m
    idx, forms, B = vertical_forms_basis(vd.E, vd.r, k)
    d = len(idx)
    n = m + d
    omega = AltElement.zero(n, k + 1)
    for t, phi in enumerate(forms):
        wt = AltElement.basis(n, (m + t + 1,))
        omega = omega + wedge(wt, _lift(phi, n))
    L = Subspace.coordinate(n, range(m))
    W = Subspace.coordinate(n, range(m, n))
    return CanonicalModel(vd, k, tuple(idx), tuple(forms), n, omega, L, W, B)


# type (k, r) construction ----------------------------------------------

def _vertical_condition(ms: MSpace, W: Subspace, reps: Sequence, r: int) -> bool:
    """ι_{w∧e_1∧…∧e_r} ω = 0 for w ∈ W and e_i among the E representatives."""
    if r == 0 or len(reps) < r or r > ms.k:
        return True
    for combo in combinations(reps, r):
        beta = contract(decomposable(combo), ms.omega)
        if beta.is_zero():
            continue
        for w in W.basis:
            if not contract(AltElement.from_vector(w), beta).is_zero():
                return False
    return True


def _phi_columns(ms: MSpace, W: Subspace, Lp: Subspace) -> list[tuple]:
    """Columns: coefficients of (ι_w ω)|_{L'} for the basis w of W."""
    inc = Lp.inclusion()
    return [pullback(inc, contract(AltElement.from_vector(w), ms.omega)).coefficients() for w in W.basis]


def _quotient_reps(W: Subspace, E: Subspace | None, Lp: Subspace) -> list:
    if E is None:
        return []
    return list(((E + W) & Lp).basis)


def psi_correction(ms: MSpace, W: Subspace, Lp: Subspace) -> list[tuple] | None:
    """Solve φ(w(l)) = ψ(l)|_{L'} with ψ(l) = -ι_l ω/(k+1) for each basis l of L'.

    Returns the coordinates of w(l) in W's basis, or None when some ψ(l)
    leaves the image of φ.
    """
    k = ms.k
    inc = Lp.inclusion()
    cols = _phi_columns(ms, W, Lp)
    mat = transpose(cols)
    out = []
    for l in Lp.basis:
        rhs = pullback(inc, contract(AltElement.from_vector(l), ms.omega)).coefficients()
        rhs = [-x / (k + 1) for x in rhs]
        sol = solve(mat, rhs, W.dim)
        if sol is None:
            return None
        out.append(sol)
    return out


def _general_correction(ms: MSpace, W: Subspace, Lp: Subspace) -> list[tuple] | None:
    """Solve for a map A: L' → W with ω vanishing on the graph of A.

    Terms with two or more W entries vanish by 1-isotropy, so the condition
    is linear in the entries of A.
    """
    k = ms.k
    m = Lp.dim
    dW = W.dim
    inc = Lp.inclusion()
    base = pullback(inc, ms.omega)
    phis = [pullback(inc, contract(AltElement.from_vector(w), ms.omega)) for w in W.basis]
    rows, rhs = [], []
    for S in basis_indices(m, k + 1):
        row = [Fraction(0)] * (m * dW)
        for j, s in enumerate(S):
            rest = S[:j] + S[j + 1:]
            sign = -1 if j % 2 else 1
            for t in range(dW):
                c = phis[t].terms.get(rest)
                if c:
                    row[(s - 1) * dW + t] += sign * c
        rows.append(tuple(row))
        rhs.append(-base.terms.get(S, Fraction(0)))
    if not rows:
        return [tuple([Fraction(0)] * dW) for _ in range(m)]
    sol = solve(rows, rhs, m * dW)
    if sol is None:
        return None
    return [tuple(sol[s * dW:(s + 1) * dW]) for s in range(m)]


def check_type_kr(ms: MSpace, W: Subspace, E: Subspace | None, r: int, Lp: Subspace | None = None) -> Subspace:
    """Verify the type-(k, r) hypotheses for (W, E); returns the complement used."""
    cw = classify(ms, W, 1)
    if not cw.is_j_lagrangian:
        raise PreconditionError("hypothesis failed: W is not 1-Lagrangian")
    if Lp is None:
        Lp = W.complement()
    if not Lp.is_complement(W):
        raise PreconditionError("hypothesis failed: the chosen L' is not a complement of W")
    reps = _quotient_reps(W, E, Lp)
    if not _vertical_condition(ms, W, reps, r):
        raise PreconditionError(f"hypothesis failed: {r}-fold vertical vanishing on E")
    m = ms.n - W.dim
    expect = vertical_dimension(m, len(reps), ms.k, r)
    if W.dim != expect:
        raise PreconditionError(
            f"hypothesis failed: dim W = {W.dim} but dim Λ^{ms.k}_{r} (V/W)* = {expect}"
        )
    return Lp


def lagrangian_complement(
    ms: MSpace, W: Subspace, E: Subspace | None, r: int, complement: Subspace | None = None
) -> Subspace:
    """A k-Lagrangian complement U of the 1-Lagrangian W.

    U is the graph over a complement L' (default: the pivot complement of W)
    of l ↦ φ^{-1}(ψ(l)|_{L'}), ψ(l) = -ι_l ω/(k+1).  When some ψ(l) is not
    r-vertical on L' the graph map is found by solving the linear isotropy
    system directly.
    """
    Lp = check_type_kr(ms, W, E, r, complement)
    cols = _phi_columns(ms, W, Lp)
    from .linalg import rank

    if rank(transpose(cols), W.dim) != W.dim:
        raise PreconditionError("hypothesis failed: φ: W → Λ^k(V/W)* is not injective")
    corr = psi_correction(ms, W, Lp)
    if corr is None:
        log.debug("ψ(l) not vertical on the chosen complement; solving isotropy system")
        corr = _general_correction(ms, W, Lp)
        if corr is None:
            raise PreconditionError("no k-isotropic graph over the chosen complement")
    gens = []
    for l, a in zip(Lp.basis, corr):
        v = list(l)
        for c, w in zip(a, W.basis):
            if c:
                v = [x + c * y for x, y in zip(v, w)]
        gens.append(v)
    U = Subspace.span(gens, ms.n)
    assert U.is_complement(W), "constructed graph is not complementary to W"
    assert is_k_isotropic_via_pullback(ms, U), "constructed complement is not k-isotropic"
    return U


@dataclass(frozen=True)
class TypeKRWitness:
    W: Subspace
    E: Subspace
    L: Subspace
    dim_W: int
    dim_vertical: int
    model: CanonicalModel
    phi: LinearMap          # W coordinates -> model fiber coordinates
    Phi: LinearMap          # V -> model space
    roundtrip: bool

    @property
    def dimension_certificate(self) -> bool:
        return self.dim_W == self.dim_vertical


def build_multisymplectomorphism(
    ms: MSpace, L: Subspace, W: Subspace, E: Subspace | None, r: int
) -> TypeKRWitness:
    """Φ = id_L ⊕ φ, φ(w) = (ι_w ω)|_L, into the canonical model on L."""
    k = ms.k
    if E is None:
        E = Subspace.zero(ms.n)
    if not L.is_complement(W):
        raise PreconditionError("hypothesis failed: V ≠ L ⊕ W")
    if not E.issubspace(L):
        raise PreconditionError("hypothesis failed: E ⊄ L")
    if not classify(ms, L, k).is_j_lagrangian:
        raise PreconditionError(f"hypothesis failed: L is not {k}-Lagrangian")
    if not classify(ms, W, 1).is_j_lagrangian:
        raise PreconditionError("hypothesis failed: W is not 1-Lagrangian")
    if r and E.dim >= r and r <= k + 1:
        for combo in combinations(E.basis, r):
            if not contract(decomposable(combo), ms.omega).is_zero():
                raise PreconditionError(f"hypothesis failed: ι_(e_1∧…∧e_{r}) ω ≠ 0 on E")
    m = L.dim
    dim_vert = vertical_dimension(m, E.dim, k, r)
    if W.dim != dim_vert:
        raise PreconditionError(
            f"hypothesis failed: dim W = {W.dim} but dim Λ^{k}_{r} L* = {dim_vert}"
        )
    E_coords = Subspace.span([L.coordinates(e) for e in E.basis], m)
    model = build_canonical(VerticalData(m, E_coords, r if r <= E.dim else 0), k)
    F = transpose([f.coefficients() for f in model.forms])  # C(m,k) x d
    inc = L.inclusion()
    phi_cols = []
    for w in W.basis:
        img = pullback(inc, contract(AltElement.from_vector(w), ms.omega)).coefficients()
        c = solve(F, img, len(model.forms))
        if c is None:
            raise PreconditionError("hypothesis failed: (ι_w ω)|_L is not r-vertical")
        phi_cols.append(c)
    phi = LinearMap.from_columns(phi_cols, len(model.forms)) if phi_cols else LinearMap.zero(0, 0)
    if not phi.is_invertible():
        raise PreconditionError("φ is not invertible: dimension equality or Lagrangian hypothesis fails")
    pa, pb = direct_sum_projections(L, W)
    rows = list(pa.matrix) + list(phi.compose(pb).matrix)
    Phi = LinearMap(tuple(rows), ms.n, model.n)
    roundtrip = pullback(Phi, model.omega) == ms.omega
    return TypeKRWitness(W, E, L, W.dim, dim_vert, model, phi, Phi, roundtrip)


def type_kr_witness(ms: MSpace, W: Subspace, E: Subspace | None, r: int) -> TypeKRWitness:
    """Complete the type-(k, r) data (W, E) to a multisymplectomorphism onto the model."""
    U = lagrangian_complement(ms, W, E, r)
    E_U = ((E + W) & U) if E is not None else Subspace.zero(ms.n)
    return build_multisymplectomorphism(ms, U, W, E_U, r)


def conjugate(model: CanonicalModel, G: LinearMap) -> tuple[MSpace, Subspace, Subspace]:
    """Transport the model along an invertible G: returns (G*Ω_L, G⁻¹W, G⁻¹E)."""
    Ginv = G.inverse()
    ms = MSpace(pullback(G, model.omega))
    return ms, model.W.image(Ginv), model.E.image(Ginv)


@dataclass(frozen=True)
class FlatImageReport:
    forms: tuple
    witnesses: tuple        # preimages under ♭₁ (None if missing)
    in_W: tuple

    @property
    def ok(self) -> bool:
        return all(w is not None for w in self.witnesses)


def flat_image_lemma_check(ms: MSpace, W: Subspace, E: Subspace | None, r: int) -> FlatImageReport:
    """Every k-form annihilating W and r-fold E-vertical is ι_v ω for some v."""
    k = ms.k
    Lp = W.complement()
    pa, _ = direct_sum_projections(Lp, W)
    m = Lp.dim
    E_bar = Subspace.span([pa(e) for e in E.basis], m) if E is not None else Subspace.zero(m)
    rr = r if r <= E_bar.dim else 0
    _, base_forms, _ = vertical_forms_basis(E_bar, rr, k)
    forms = [pullback(pa, f) for f in base_forms]
    wcols = transpose([contract(AltElement.from_vector(w), ms.omega).coefficients() for w in W.basis])
    full = ms.flat(1).matrix
    witnesses, in_w = [], []
    for a in forms:
        rhs = a.coefficients()
        c = solve(wcols, rhs, W.dim) if W.dim else None
        if c is not None:
            v = [Fraction(0)] * ms.n
            for ci, w in zip(c, W.basis):
                v = [x + ci * y for x, y in zip(v, w)]
            witnesses.append(tuple(v))
            in_w.append(True)
            continue
        v = solve(full, rhs, ms.n)
        witnesses.append(v)
        in_w.append(False)
    return FlatImageReport(tuple(forms), tuple(witnesses), tuple(in_w))


def flat_image_lemma_check_model(model: CanonicalModel) -> FlatImageReport:
    if not model.vd.regular:
        raise PreconditionError("the flat-image check needs a regular model (r ≠ 1)")
    return flat_image_lemma_check(model.ms, model.W, model.E, model.vd.r)


def admissible_tuples(max_m: int, max_k: int, rs: Sequence[int]):
    """All (m, k, r, dim E) satisfying the (k, r) hypotheses (dim E = 0 when r = 0)."""
    for m in range(1, max_m + 1):
        for k in range(1, min(max_k, m) + 1):
            for r in rs:
                if r == 0:
                    yield m, k, 0, 0
                    continue
                for e in range(r, m + 1):
                    if k - r + 1 <= m - e:
                        yield m, k, r, e
