"""Hamiltonian forms modulo closed forms and their graded bracket."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exterior import FORM, VECTOR
from .fields import (
    PolyAltField,
    contract,
    d,
    is_closed,
    pairing,
    pullback_along,
    schouten,
    wedge,
)
from .linalg import PreconditionError, solve
from .poly import Poly


class WitnessError(ValueError):
    """A multivector field does not realise the claimed Hamiltonian class."""


@dataclass(frozen=True)
class GradedClass:
    """Class of a Hamiltonian form of the given order in Ω^order / closed forms.

    ``rep`` is None for the zero class of a negative order.  ``witness`` is an
    optional multivector field U with ι_U ω = d rep.
    """

    k: int
    order: int
    rep: PolyAltField | None
    witness: PolyAltField | None = field(default=None, compare=False)

    @property
    def deg(self) -> int:
        return self.k - 1 - self.order

    @property
    def witness_degree(self) -> int:
        return self.k - self.order

    def is_zero(self) -> bool:
        return self.rep is None or is_closed(self.rep)

    def equals(self, other: "GradedClass") -> bool:
        """Same class: the representatives differ by a closed form."""
        if self.is_zero() and other.is_zero():
            return True
        if self.order != other.order or self.rep is None or other.rep is None:
            return False
        return is_closed(self.rep - other.rep)

    def __add__(self, other: "GradedClass") -> "GradedClass":
        if self.rep is None:
            return other
        if other.rep is None:
            return self
        if self.order != other.order:
            raise ValueError("cannot add classes of different orders")
        w = None
        if self.witness is not None and other.witness is not None:
            w = self.witness + other.witness
        return GradedClass(self.k, self.order, self.rep + other.rep, w)

    def scale(self, c) -> "GradedClass":
        if self.rep is None:
            return self
        w = self.witness.scale(c) if self.witness is not None else None
        return GradedClass(self.k, self.order, self.rep.scale(c), w)


def hamiltonian_class(alpha: PolyAltField, omega: PolyAltField, witness: PolyAltField) -> GradedClass:
    """Class of α after checking ι_U ω = dα for the witness U."""
    k = omega.degree - 1
    check_witness(alpha, omega, witness)
    return GradedClass(k, alpha.degree, alpha, witness)


def check_witness(alpha: PolyAltField, omega: PolyAltField, U: PolyAltField) -> None:
    k = omega.degree - 1
    if U.variance != VECTOR or alpha.variance != FORM:
        raise WitnessError("witness must be a multivector field and α a form")
    if U.degree != k - alpha.degree:
        raise WitnessError(
            f"a Hamiltonian {alpha.degree}-form needs a {k - alpha.degree}-vector witness, got degree {U.degree}"
        )
    if contract(U, omega) != d(alpha):
        raise WitnessError("ι_U ω ≠ dα")


def _zero_witness(cls: GradedClass, nvars: int) -> PolyAltField:
    return PolyAltField.zero(nvars, max(cls.witness_degree, 0), VECTOR)


def bracket(a: GradedClass, b: GradedClass, omega: PolyAltField, Ua=None, Ub=None) -> GradedClass:
    """{â, b̂} = -(ι_{Ua∧Ub} ω)^, with witness [Ua, Ub]."""
    k = omega.degree - 1
    n = omega.nvars
    order = a.order + b.order - k + 1
    if a.rep is None or b.rep is None or order < 0:
        return GradedClass(k, order, None if order < 0 else PolyAltField.zero(n, order), None)
    Ua = Ua if Ua is not None else a.witness
    Ub = Ub if Ub is not None else b.witness
    if Ua is None and a.is_zero():
        Ua = _zero_witness(a, n)
    if Ub is None and b.is_zero():
        Ub = _zero_witness(b, n)
    if Ua is None or Ub is None:
        raise WitnessError("a Hamiltonian witness is required for a nonzero class")
    check_witness(a.rep, omega, Ua)
    check_witness(b.rep, omega, Ub)
    rep = -contract(wedge(Ua, Ub), omega)
    return GradedClass(k, order, rep, schouten(Ua, Ub))


def graded_bracket(
    a: GradedClass, b: GradedClass, omega: PolyAltField, Ua=None, Ub=None, sign: str = "right"
) -> GradedClass:
    """{â, b̂}• = (-1)^{deg b̂} {â, b̂}; degrees add.

    With ι_{v_1∧…∧v_q}ω = ω(v_1, …, v_q, ·) this sign makes {·,·}• a graded
    Lie algebra.  ``sign="left"`` uses (-1)^{deg â} instead, which only works
    for the opposite contraction order and is kept for comparison.
    """
    out = bracket(a, b, omega, Ua, Ub)
    if sign not in ("right", "left"):
        raise ValueError(f"unknown sign convention {sign!r}")
    flip = (b.deg if sign == "right" else a.deg) % 2
    if flip and out.rep is not None:
        out = out.scale(-1)
    return out


@dataclass
class IdentityReport:
    antisymmetry: list = field(default_factory=list)
    jacobi: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.antisymmetry) and all(self.jacobi)


def graded_identities_check(omega: PolyAltField, triples: Sequence[tuple], sign: str = "right") -> IdentityReport:
    """Graded antisymmetry and graded Jacobi for {·,·}• on (a, b, c) triples of classes."""
    rep = IdentityReport()

    def br(x, y):
        return graded_bracket(x, y, omega, sign=sign)

    for a, b, c in triples:
        for x, y in ((a, b), (b, c), (a, c)):
            lhs = br(x, y)
            rhs = br(y, x)
            e = -1 if (x.deg * y.deg) % 2 == 0 else 1
            rep.antisymmetry.append(lhs.equals(rhs.scale(e)))
        t1 = br(a, br(b, c)).scale((-1) ** (a.deg * c.deg))
        t2 = br(b, br(c, a)).scale((-1) ** (b.deg * a.deg))
        t3 = br(c, br(a, b)).scale((-1) ** (c.deg * b.deg))
        rep.jacobi.append((t1 + t2 + t3).is_zero())
    return rep


# coisotropic slices ----------------------------------------------------

def slice_inclusion(nvars: int, fixed: Sequence[int]) -> list[Poly]:
    """The polynomial map R^{n-s} → R^n embedding {x^i = 0 : i ∈ fixed} (1-based)."""
    fixed = set(fixed)
    free = [i for i in range(1, nvars + 1) if i not in fixed]
    m = len(free)
    out = []
    for i in range(1, nvars + 1):
        out.append(Poly.zero(m) if i in fixed else Poly.var(m, free.index(i)))
    return out


def restrict(alpha: PolyAltField, fixed: Sequence[int]) -> PolyAltField:
    return pullback_along(slice_inclusion(alpha.nvars, fixed), alpha)


class TangencyError(PreconditionError):
    """A witness cannot be corrected by ker ♭₁-valued fields to be tangent."""


def make_tangent(U: PolyAltField, omega: PolyAltField, fixed: Sequence[int]) -> PolyAltField:
    """Subtract a ker ♭₁-valued field so the vector field U is tangent to the slice.

    ω must have constant coefficients.
    """
    from .msym import MSpace

    n = omega.nvars
    if U.degree != 1:
        raise TangencyError("only vector-field witnesses are adjusted")
    const = omega.at([0] * n)
    ker = MSpace(const).kernel_flat1().basis
    fixed = sorted(set(fixed))
    zero_pt = slice_inclusion(n, fixed)
    full_vars = [Poly.var(n, i) for i in range(n)]
    # the normal components, restricted to the slice and re-expressed on R^n
    free = [i for i in range(1, n + 1) if i not in fixed]
    lift = [full_vars[i - 1] for i in free]
    targets = {}
    for s in fixed:
        c = U.terms.get((s,))
        if c is None:
            continue
        on_slice = c.substitute(zero_pt)
        targets[s] = on_slice.substitute(lift) if lift else on_slice
    targets = {s: t for s, t in targets.items() if t}
    if not targets:
        return U
    if not ker:
        raise TangencyError("witness is not tangent and ker ♭₁ = 0")
    monos = set()
    for t in targets.values():
        monos.update(t.terms)
    M = [[kv[s - 1] for kv in ker] for s in fixed]
    corr: dict = {}
    for e in sorted(monos):
        rhs = [targets[s].terms.get(e, Fraction(0)) if s in targets else Fraction(0) for s in fixed]
        x = solve(M, rhs, len(ker))
        if x is None:
            raise TangencyError("normal part of the witness is not ker ♭₁-valued on the slice")
        for kv, c in zip(ker, x):
            if not c:
                continue
            for i, comp in enumerate(kv):
                if comp:
                    mono = Poly(n, {e: c * comp})
                    key = (i + 1,)
                    corr[key] = corr[key] + mono if key in corr else mono
    K = PolyAltField(n, 1, corr, VECTOR)
    if not contract(K, omega).is_zero():
        raise AssertionError("correction is not ker ♭₁-valued")
    return U - K


@dataclass
class SubalgebraReport:
    pairs: int = 0
    adjusted: int = 0
    in_ideal: list = field(default_factory=list)
    rep_vanishes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.in_ideal)


def coisotropic_subalgebra_check(
    omega: PolyAltField, fixed: Sequence[int], pairs: Sequence[tuple[GradedClass, GradedClass]]
) -> SubalgebraReport:
    """For classes of order k-1 closed on the slice N = {x^i = 0, i ∈ fixed},
    the bracket stays closed on N."""
    from .msym import MSpace, classify
    from .linalg import Subspace

    n = omega.nvars
    k = omega.degree - 1
    const = omega.at([0] * n)
    ms = MSpace(const)
    N = Subspace.coordinate(n, [i - 1 for i in range(1, n + 1) if i not in set(fixed)])
    if not classify(ms, N, k).is_j_coisotropic:
        raise PreconditionError(f"the slice is not {k}-coisotropic")
    rep = SubalgebraReport()
    for a, b in pairs:
        for c in (a, b):
            if c.order != k - 1:
                raise PreconditionError("subalgebra check needs Hamiltonian (k-1)-forms")
            if c.rep is not None and not restrict(d(c.rep), fixed).is_zero():
                raise PreconditionError("class is not closed on N")
        Ua = make_tangent(a.witness, omega, fixed)
        Ub = make_tangent(b.witness, omega, fixed)
        rep.adjusted += (Ua != a.witness) + (Ub != b.witness)
        out = graded_bracket(a, b, omega, Ua, Ub)
        rep.pairs += 1
        rep.in_ideal.append(out.rep is None or restrict(d(out.rep), fixed).is_zero())
        rep.rep_vanishes.append(out.rep is None or restrict(out.rep, fixed).is_zero())
    return rep


# conserved quantities ----------------------------------------------------

@dataclass(frozen=True)
class ConservedReport:
    pairing: Poly
    conserved: bool                # ⟨dα, X_H⟩ = 0
    bracket_rep_zero: bool | None  # representative of {α̂, Ĥ}• vanishes
    bracket_class_zero: bool | None

    @property
    def agree(self) -> bool | None:
        if self.bracket_rep_zero is None:
            return None
        return self.conserved == self.bracket_rep_zero


def conserved_quantity_check(
    X_H: PolyAltField, H: PolyAltField, alpha: PolyAltField, omega: PolyAltField, U_alpha=None
) -> ConservedReport:
    """⟨dα, X_H⟩ = 0, cross-checked against the bracket {α̂, Ĥ}• when α has a witness.

    The bracket representative is ±⟨dα, X_H⟩ itself, so it vanishes exactly
    when α is conserved; as a class it also vanishes when the pairing is a
    nonzero constant.
    """
    check_witness(H, omega, X_H)
    q = X_H.degree
    if alpha.degree != q - 1:
        raise WitnessError(f"a conserved quantity for a {q}-vector field is a {q - 1}-form")
    p = pairing(X_H, d(alpha))
    conserved = p.is_zero()
    if U_alpha is None:
        return ConservedReport(p, conserved, None, None)
    k = omega.degree - 1
    a = hamiltonian_class(alpha, omega, U_alpha)
    h = GradedClass(k, H.degree, H, X_H)
    out = graded_bracket(a, h, omega)
    rep_zero = out.rep is None or out.rep.is_zero()
    return ConservedReport(p, conserved, rep_zero, out.is_zero())
