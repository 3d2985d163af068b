"""Differential forms and multivector fields with polynomial coefficients.

Forms are written in the basis dx^I and multivector fields in ∂_J (printed
``e<j>``); both share one sparse representation with a variance tag.
"""
from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Mapping, Sequence

from .exterior import FORM, VECTOR, AltElement, normalize_index
from .kernels import contract_terms, merge_sign, wedge_terms
from .linalg import AmbientMismatchError, DegreeError, PreconditionError, as_fraction
from .poly import Poly, format_monomial, format_scaled, join_signed

DEFAULT_MAX_DEGREE = 6


class PolyAltField:
    """A p-form or p-vector field on Q^nvars with Poly coefficients."""

    __slots__ = ("nvars", "degree", "variance", "terms", "names")

    def __init__(
        self,
        nvars: int,
        degree: int,
        terms: Mapping | None = None,
        variance: str = FORM,
        names: Sequence[str] | None = None,
    ):
        clean: dict = {}
        for key, c in (terms or {}).items():
            s, k = normalize_index(key)
            if s == 0:
                continue
            if len(k) != degree:
                raise DegreeError(f"index {key} has length {len(k)}, expected {degree}")
            if k and (k[0] < 1 or k[-1] > nvars):
                raise AmbientMismatchError(f"index {key} out of range 1..{nvars}")
            if not isinstance(c, Poly):
                c = Poly.const(nvars, c)
            elif c.nvars != nvars:
                raise AmbientMismatchError("coefficient lives in a different number of variables")
            if s < 0:
                c = -c
            prev = clean.get(k)
            clean[k] = c if prev is None else prev + c
        self.nvars = nvars
        self.degree = degree
        self.variance = variance
        self.terms = {k: v for k, v in clean.items() if v}
        self.names = tuple(names) if names else None

    @classmethod
    def _raw(cls, nvars, degree, terms, variance, names=None):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.degree = degree
        obj.variance = variance
        obj.terms = terms
        obj.names = names
        return obj

    @classmethod
    def zero(cls, nvars: int, degree: int, variance: str = FORM, names=None) -> "PolyAltField":
        return cls._raw(nvars, degree, {}, variance, tuple(names) if names else None)

    @classmethod
    def function(cls, f: Poly, names=None) -> "PolyAltField":
        return cls._raw(f.nvars, 0, {(): f} if f else {}, FORM, tuple(names) if names else None)

    @classmethod
    def basis(cls, nvars: int, idx: Sequence[int], variance: str = FORM, coef=1, names=None) -> "PolyAltField":
        return cls(nvars, len(idx), {tuple(idx): coef}, variance, names)

    @classmethod
    def from_alt(cls, a: AltElement, names=None) -> "PolyAltField":
        return cls._raw(
            a.n, a.degree, {k: Poly.const(a.n, v) for k, v in a.terms.items()}, a.variance,
            tuple(names) if names else None,
        )

    def _like(self, degree, terms, variance=None) -> "PolyAltField":
        return PolyAltField._raw(self.nvars, degree, terms, variance or self.variance, self.names)

    # protocol -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyAltField)
            and self.nvars == other.nvars
            and self.degree == other.degree
            and self.variance == other.variance
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.degree, self.variance, frozenset(self.terms.items())))

    def _same(self, other: "PolyAltField"):
        if self.nvars != other.nvars or self.variance != other.variance:
            raise AmbientMismatchError("fields live in different spaces")
        if self.degree != other.degree:
            raise DegreeError(f"degrees {self.degree} and {other.degree} differ")

    def __add__(self, other: "PolyAltField") -> "PolyAltField":
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out[k] + v if k in out else v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return self._like(self.degree, out)

    def __neg__(self) -> "PolyAltField":
        return self._like(self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "PolyAltField") -> "PolyAltField":
        return self + (-other)

    def scale(self, c) -> "PolyAltField":
        if isinstance(c, Poly):
            out = {k: v * c for k, v in self.terms.items()}
            return self._like(self.degree, {k: v for k, v in out.items() if v})
        c = as_fraction(c)
        if not c:
            return self._like(self.degree, {})
        return self._like(self.degree, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, c) -> "PolyAltField":
        return self.scale(c)

    __rmul__ = __mul__

    def __xor__(self, other: "PolyAltField") -> "PolyAltField":
        return wedge(self, other)

    def __repr__(self) -> str:
        kind = "form" if self.variance == FORM else "mvf"
        return f"PolyAltField[{kind}, deg {self.degree}]({format_field(self)})"

    def function_part(self) -> Poly:
        """Coefficient of a degree-0 field."""
        if self.degree:
            raise DegreeError("not a function")
        return self.terms.get((), Poly.zero(self.nvars))

    def max_poly_degree(self) -> int:
        return max((c.degree() for c in self.terms.values()), default=-1)

    def at(self, point: Sequence) -> AltElement:
        """Value at a rational point."""
        return AltElement._raw(
            self.nvars, self.degree,
            {k: v for k, v in ((k, c.evaluate(point)) for k, c in self.terms.items()) if v},
            self.variance,
        )

    def map_coefficients(self, f) -> "PolyAltField":
        out = {k: f(v) for k, v in self.terms.items()}
        return self._like(self.degree, {k: v for k, v in out.items() if v})

    def partial(self, a: int) -> "PolyAltField":
        """Coefficientwise ∂/∂x^a (a 1-based)."""
        return self.map_coefficients(lambda c: c.diff(a - 1))


def form(nvars: int, degree: int, terms: Mapping | None = None, names=None) -> PolyAltField:
    return PolyAltField(nvars, degree, terms, FORM, names)


def mvf(nvars: int, degree: int, terms: Mapping | None = None, names=None) -> PolyAltField:
    return PolyAltField(nvars, degree, terms, VECTOR, names)


def coordinate(nvars: int, i: int) -> Poly:
    """x^i (1-based)."""
    return Poly.var(nvars, i - 1)


# algebra ---------------------------------------------------------------

def wedge(a: PolyAltField, b: PolyAltField) -> PolyAltField:
    if a.nvars != b.nvars or a.variance != b.variance:
        raise AmbientMismatchError("wedge of fields from different spaces")
    deg = a.degree + b.degree
    if deg > a.nvars:
        return a._like(deg, {})
    return a._like(deg, wedge_terms(a.terms, b.terms))


def contract(u: PolyAltField, w: PolyAltField) -> PolyAltField:
    """ι_u w with ι_{u∧v} = ι_v ι_u (the first slots are filled first)."""
    if u.nvars != w.nvars:
        raise AmbientMismatchError("contraction across different spaces")
    if u.variance == w.variance:
        raise AmbientMismatchError("contraction needs one form and one multivector")
    if u.degree > w.degree:
        raise DegreeError(f"cannot contract degree {u.degree} into degree {w.degree}")
    return w._like(w.degree - u.degree, contract_terms(u.terms, w.terms))


def pairing(u: PolyAltField, w: PolyAltField) -> Poly:
    """Full contraction ⟨w, u⟩ as a polynomial."""
    if u.degree != w.degree:
        raise DegreeError("full contraction needs equal degrees")
    return contract(u, w).terms.get((), Poly.zero(u.nvars))


def d(alpha: PolyAltField) -> PolyAltField:
    """Exterior derivative."""
    if alpha.variance != FORM:
        raise AmbientMismatchError("d acts on forms")
    n = alpha.nvars
    out: dict = {}
    for I, c in alpha.terms.items():
        for a in range(1, n + 1):
            dc = c.diff(a - 1)
            if not dc:
                continue
            s, key = merge_sign((a,), I)
            if s == 0:
                continue
            if s < 0:
                dc = -dc
            out[key] = out[key] + dc if key in out else dc
    return alpha._like(alpha.degree + 1, {k: v for k, v in out.items() if v})


def is_closed(alpha: PolyAltField) -> bool:
    return d(alpha).is_zero()


def schouten_standard(U: PolyAltField, V: PolyAltField) -> PolyAltField:
    """Schouten–Nijenhuis bracket in the usual graded-Lie normalisation.

    [U, V] = (-1)^{p-1} Σ_a ι_{dx^a}U ∧ ∂_a V - Σ_a ∂_a U ∧ ι_{dx^a}V.  It is
    the Lie bracket on vector fields, [U, V] = -(-1)^{(p-1)(q-1)} [V, U], and
    for closed ω and locally Hamiltonian U, V it gives
    ι_{[U,V]}ω = (-1)^q d ι_{U∧V}ω.
    """
    if U.variance != VECTOR or V.variance != VECTOR:
        raise AmbientMismatchError("the Schouten bracket acts on multivector fields")
    if U.nvars != V.nvars:
        raise AmbientMismatchError("fields on different spaces")
    n = U.nvars
    p, q = U.degree, V.degree
    deg = p + q - 1
    if p == 0 and q == 0:
        return PolyAltField.zero(n, 0, VECTOR, U.names)
    out = PolyAltField.zero(n, max(deg, 0), VECTOR, U.names)
    if deg < 0 or deg > n:
        return out
    sign = -1 if (p - 1) % 2 else 1
    for a in range(1, n + 1):
        dxa = {(a,): Fraction(1)}
        if p >= 1:
            iU = U._like(p - 1, contract_terms(dxa, U.terms))
            if iU:
                dV = V.partial(a)
                if dV:
                    t = wedge(iU, dV)
                    out = out + (t if sign > 0 else -t)
        if q >= 1:
            iV = V._like(q - 1, contract_terms(dxa, V.terms))
            if iV:
                dU = U.partial(a)
                if dU:
                    out = out - wedge(dU, iV)
    return out


def schouten(U: PolyAltField, V: PolyAltField) -> PolyAltField:
    """Bracket of multivector fields normalised so that ι_{[U,V]}ω = -d ι_{U∧V}ω.

    Equal to (-1)^{q-1} times :func:`schouten_standard` for a q-vector V, so it
    agrees with the Lie bracket on vector fields.
    """
    S = schouten_standard(U, V)
    return S if V.degree % 2 else -S


def lie_derivative(U: PolyAltField, omega: PolyAltField) -> PolyAltField:
    """£_U ω = ι_U dω + (-1)^{q+1} d ι_U ω."""
    q = U.degree
    if q > omega.degree + 1:
        raise DegreeError(f"cannot take the Lie derivative of a {omega.degree}-form along a {q}-vector")
    first = contract(U, d(omega))
    if q <= omega.degree:
        second = d(contract(U, omega))
        if q % 2 == 0:
            second = -second
        return first + second
    return first


def is_locally_hamiltonian(U: PolyAltField, omega: PolyAltField) -> bool:
    if not is_closed(omega):
        raise PreconditionError("ω is not closed")
    return is_closed(contract(U, omega))


def homotopy(beta: PolyAltField) -> PolyAltField:
    """Radial homotopy operator based at the origin: d h + h d = id on p ≥ 1 forms.

    x^e dx^I ↦ x^e/(p+|e|) ι_Δ dx^I with Δ = Σ x^a ∂_a.
    """
    if beta.variance != FORM:
        raise AmbientMismatchError("the homotopy operator acts on forms")
    p = beta.degree
    if p == 0:
        raise DegreeError("the homotopy operator needs degree ≥ 1")
    n = beta.nvars
    out: dict = {}
    for I, c in beta.terms.items():
        scaled = Poly._raw(n, {e: v / (p + sum(e)) for e, v in c.terms.items()})
        for j, a in enumerate(I):
            key = I[:j] + I[j + 1:]
            t = scaled * Poly.var(n, a - 1)
            if j % 2:
                t = -t
            out[key] = out[key] + t if key in out else t
    return beta._like(p - 1, {k: v for k, v in out.items() if v})


def hamiltonian_potential(U: PolyAltField, omega: PolyAltField) -> PolyAltField:
    """A form α with dα = ι_U ω, produced by the radial homotopy operator."""
    if not is_locally_hamiltonian(U, omega):
        raise PreconditionError("ι_U ω is not closed, so U is not locally Hamiltonian")
    beta = contract(U, omega)
    if beta.degree == 0:
        raise DegreeError("ι_U ω is a function; it has no potential of negative degree")
    alpha = homotopy(beta)
    if d(alpha) != beta:
        raise AssertionError("homotopy output does not integrate ι_U ω")
    return alpha


def pullback_along(F: Sequence[Poly], alpha: PolyAltField, names=None) -> PolyAltField:
    """Pull a form on Q^n back along the polynomial map F = (F^1, …, F^n) from Q^m."""
    if alpha.variance != FORM:
        raise AmbientMismatchError("only forms pull back")
    if len(F) != alpha.nvars:
        raise AmbientMismatchError("the map must have one component per target variable")
    m = F[0].nvars if F else 0
    dF = []
    for f in F:
        dF.append(
            PolyAltField._raw(m, 1, {(a + 1,): f.diff(a) for a in range(m) if f.diff(a)}, FORM)
        )
    out = PolyAltField.zero(m, alpha.degree, FORM, names)
    cache: dict = {}
    for I, c in alpha.terms.items():
        acc = None
        for t in range(1, len(I) + 1):
            pre = I[:t]
            if pre in cache:
                acc = cache[pre]
                continue
            acc = dF[pre[0] - 1] if t == 1 else wedge(acc, dF[pre[-1] - 1])
            cache[pre] = acc
        coeff = c.substitute(F)
        if acc is None:
            acc = PolyAltField._raw(m, 0, {(): Poly.const(m, 1)}, FORM)
        out = out + acc.scale(coeff)
    return out


def extend_field(a: PolyAltField, nvars: int, offset: int = 0, names=None) -> PolyAltField:
    """Regard a field on Q^k as one on Q^nvars with variables shifted by ``offset``."""
    terms = {tuple(i + offset for i in k): c.extend(nvars, offset) for k, c in a.terms.items()}
    return PolyAltField._raw(nvars, a.degree, terms, a.variance, tuple(names) if names else None)


# random generation -----------------------------------------------------

def random_poly(nvars: int, max_degree: int, rng: random.Random, density: float = 0.5, coef: int = 3) -> Poly:
    from itertools import product

    terms = {}
    for e in product(range(max_degree + 1), repeat=nvars):
        if sum(e) <= max_degree and rng.random() < density / (1 + sum(e)):
            c = rng.randint(-coef, coef)
            if c:
                terms[e] = Fraction(c)
    return Poly(nvars, terms)


def random_field(
    nvars: int, degree: int, variance: str, max_degree: int, rng: random.Random, density: float = 0.6
) -> PolyAltField:
    from .exterior import basis_indices

    terms = {}
    for I in basis_indices(nvars, degree):
        if rng.random() < density:
            c = random_poly(nvars, max_degree, rng)
            if c:
                terms[I] = c
    return PolyAltField(nvars, degree, terms, variance)


# textual form ----------------------------------------------------------

class FieldParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<dx>dx\d+)|(?P<e>e\d+)|(?P<x>x\d+)|(?P<op>[-+^*()]))"
)


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FieldParseError("unexpected character", text, pos)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return toks


def parse_field(
    text: str,
    nvars: int,
    variance: str | None = None,
    max_degree: int | None = None,
) -> PolyAltField:
    """Parse a sum of terms such as ``3/2 x1^2 dx2^dx3 - x3 dx1^dx2`` or ``x1 e1^e2``.

    A term is an optional rational coefficient, a product of powers of
    variables x1..xn, and an optional wedge of basis elements (all ``dx`` for
    forms, all ``e`` for multivectors).  A term without a basis part is a
    function.  All terms must share one degree and one variance.
    """
    toks = _tokenize(text)
    if not toks:
        raise FieldParseError("empty expression", text, 0)
    i = 0
    terms: list[tuple[int, Fraction, tuple, tuple, str | None]] = []

    def peek():
        return toks[i] if i < len(toks) else (None, None, len(text))

    sign = 1
    while True:
        kind, val, pos = peek()
        sign = 1
        while kind == "op" and val in "+-":
            if val == "-":
                sign = -sign
            i += 1
            kind, val, pos = peek()
        start = pos
        coef = Fraction(sign)
        exps = [0] * nvars
        basis: list[int] = []
        bkind = None
        seen = False
        if kind == "num":
            coef *= Fraction(val)
            i += 1
            seen = True
            kind, val, pos = peek()
        while kind == "x" or (kind == "op" and val == "*"):
            if kind == "op":
                i += 1
                kind, val, pos = peek()
                continue
            idx = int(val[1:])
            if not 1 <= idx <= nvars:
                raise FieldParseError(f"variable x{idx} outside x1..x{nvars}", text, pos)
            i += 1
            power = 1
            k2, v2, p2 = peek()
            if k2 == "op" and v2 == "^" and i + 1 < len(toks) and toks[i + 1][0] == "num":
                power = int(toks[i + 1][1])
                i += 2
            exps[idx - 1] += power
            seen = True
            kind, val, pos = peek()
        while kind in ("dx", "e"):
            if bkind is not None and kind != bkind:
                raise FieldParseError("mixed dx and e basis symbols", text, pos)
            bkind = kind
            basis.append(int(val[len(kind):]))
            if not 1 <= basis[-1] <= nvars:
                raise FieldParseError(f"basis index {basis[-1]} outside 1..{nvars}", text, pos)
            i += 1
            seen = True
            k2, v2, p2 = peek()
            if k2 == "op" and v2 == "^":
                i += 1
                kind, val, pos = peek()
                if kind not in ("dx", "e"):
                    raise FieldParseError("expected a basis symbol after '^'", text, pos)
            else:
                kind, val, pos = peek()
                break
        if not seen:
            raise FieldParseError("expected a term", text, start)
        if max_degree is not None and sum(exps) > max_degree:
            raise FieldParseError(f"coefficient degree exceeds {max_degree}", text, start)
        terms.append((len(basis), coef, tuple(exps), tuple(basis), bkind))
        kind, val, pos = peek()
        if kind is None:
            break
        if not (kind == "op" and val in "+-"):
            raise FieldParseError("expected '+' or '-'", text, pos)

    degrees = {t[0] for t in terms}
    if len(degrees) != 1:
        raise FieldParseError("terms of different degrees", text, 0)
    kinds = {t[4] for t in terms if t[4] is not None}
    if len(kinds) > 1:
        raise FieldParseError("mixed forms and multivectors", text, 0)
    kind = kinds.pop() if kinds else None
    var = variance or (VECTOR if kind == "e" else FORM)
    if kind == "dx" and var != FORM or kind == "e" and var != VECTOR:
        raise FieldParseError("basis symbols do not match the requested variance", text, 0)
    deg = degrees.pop()
    out: dict = {}
    for _, coef, exps, basis, _ in terms:
        s, key = normalize_index(basis)
        if s == 0:
            continue
        mono = Poly(nvars, {exps: coef * s})
        out[key] = out[key] + mono if key in out else mono
    return PolyAltField(nvars, deg, out, var)


def format_field(a: PolyAltField) -> str:
    """Inverse of :func:`parse_field` (up to term order)."""
    if not a.terms:
        return "0"
    sym = "e" if a.variance == VECTOR else "dx"
    names = a.names
    parts = []
    for I in sorted(a.terms):
        basis = "^".join(f"{sym}{i}" for i in I)
        for e, c in a.terms[I].sorted_terms():
            mono = format_monomial(e, names)
            body = " ".join(x for x in (mono, basis) if x)
            parts.append(format_scaled(c, body))
    return join_signed(parts)


def interior(u: PolyAltField, w: PolyAltField) -> PolyAltField | None:
    """ι_u w, or None when deg u exceeds deg w (the contraction is then zero)."""
    if u.degree > w.degree:
        return None
    return contract(u, w)


def bracket_identity_residual(U: PolyAltField, V: PolyAltField, omega: PolyAltField) -> PolyAltField | None:
    """ι_{[U,V]}ω + d ι_{U∧V}ω; None when every term vanishes for degree reasons."""
    S = schouten(U, V)
    lhs = interior(S, omega)
    rhs = interior(wedge(U, V), omega)
    rhs = d(rhs) if rhs is not None else None
    if lhs is None and rhs is None:
        return None
    if lhs is None:
        return rhs
    if rhs is None:
        return lhs
    return lhs + rhs


def solve_constant_flat(omega: PolyAltField, target: PolyAltField, q: int) -> PolyAltField | None:
    """A q-vector field U with ι_U ω = target, for constant-coefficient ω.

    Solved monomial by monomial; returns None when no solution exists.
    """
    from .exterior import basis_indices
    from .linalg import solve

    n = omega.nvars
    if any(not c.is_constant() for c in omega.terms.values()):
        raise PreconditionError("ω must have constant coefficients")
    k1 = omega.degree
    if target.degree != k1 - q:
        raise DegreeError("target has the wrong degree")
    cols = basis_indices(n, q)
    rows = basis_indices(n, k1 - q)
    const = {k: c.constant() for k, c in omega.terms.items()}
    mat_cols = [contract_terms({J: Fraction(1)}, const) for J in cols]
    M = [[mc.get(r, Fraction(0)) for mc in mat_cols] for r in rows]
    monos = set()
    for c in target.terms.values():
        monos.update(c.terms)
    out: dict = {}
    for e in sorted(monos):
        rhs = [target.terms[r].terms.get(e, Fraction(0)) if r in target.terms else Fraction(0) for r in rows]
        x = solve(M, rhs, len(cols))
        if x is None:
            return None
        for J, c in zip(cols, x):
            if c:
                mono = Poly(n, {e: c})
                out[J] = out[J] + mono if J in out else mono
    return PolyAltField(n, q, out, VECTOR, omega.names)
