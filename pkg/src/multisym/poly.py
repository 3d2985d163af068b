"""Sparse multivariate polynomials with rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import AmbientMismatchError, as_fraction


def _graded_lex_key(exp: tuple):
    return (-sum(exp), tuple(-e for e in exp))


class Poly:
    """Polynomial in ``nvars`` variables: a map exponent-tuple -> Fraction.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise AmbientMismatchError(f"exponent {e} for {nvars} variables")
            c = as_fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = as_fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        """The i-th coordinate function (0-based)."""
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, exp: Sequence[int], c=1) -> "Poly":
        return cls(nvars, {tuple(exp): c})

    # protocol -----------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise AmbientMismatchError(f"polynomials in {self.nvars} and {other.nvars} variables")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = as_fraction(other)
            if not c:
                return Poly.zero(self.nvars)
            return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return Poly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self) -> str:
        return f"Poly({self.format()})"

    # calculus -----------------------------------------------------------
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly._raw(self.nvars, out)

    def __call__(self, point: Sequence) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise AmbientMismatchError("point has the wrong number of coordinates")
        pt = [as_fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Compose with a polynomial map: x_i ↦ images[i]."""
        if len(images) != self.nvars:
            raise AmbientMismatchError("substitution needs one image per variable")
        if not images:
            return self
        target = images[0].nvars
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        out = Poly.zero(target)
        for e, c in self.terms.items():
            term = Poly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def extend(self, nvars: int, offset: int = 0) -> "Poly":
        """Embed into more variables, placing the old ones at ``offset``."""
        pad_l = (0,) * offset
        pad_r = (0,) * (nvars - offset - self.nvars)
        return Poly._raw(nvars, {pad_l + e + pad_r: c for e, c in self.terms.items()})

    def sorted_terms(self) -> list[tuple]:
        """Terms in graded lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: _graded_lex_key(t[0]))

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = format_monomial(e, names)
            parts.append(format_scaled(c, mono))
        return join_signed(parts)


def format_monomial(e: tuple, names: Sequence[str] | None = None) -> str:
    out = []
    for i, k in enumerate(e):
        if not k:
            continue
        nm = names[i] if names else f"x{i + 1}"
        out.append(nm if k == 1 else f"{nm}^{k}")
    return " ".join(out)


def format_scaled(c: Fraction, body: str) -> str:
    """``c body`` with unit coefficients suppressed."""
    if not body:
        return str(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c} {body}"


def join_signed(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out
