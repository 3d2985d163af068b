"""Exact linear algebra over the rationals: matrices, linear maps, subspaces."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .kernels import rref_fractions

Vector = tuple  # tuple[Fraction, ...]


class AmbientMismatchError(ValueError):
    """Operands live in different ambient spaces (dimension or variance)."""


class DegreeError(ValueError):
    """A degree argument is out of the admissible range."""


class PreconditionError(ValueError):
    """A mathematical hypothesis of an operation does not hold."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def vec(values: Iterable) -> Vector:
    return tuple(as_fraction(x) for x in values)


def unit(n: int, i: int) -> Vector:
    """The i-th standard basis vector of Q^n (0-based)."""
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))


def zeros(n: int) -> Vector:
    return (Fraction(0),) * n


def rref(rows: Sequence[Sequence], ncols: int):
    """Canonical reduced row-echelon form; returns ``(rows, pivots)``."""
    return rref_fractions([vec(r) for r in rows], ncols)


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of ``{x : M x = 0}`` read off the RREF (one vector per free column)."""
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> Vector | None:
    """One exact solution of ``M x = rhs`` (free variables set to 0), or None."""
    aug = [list(vec(r)) + [as_fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref_fractions(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x)


def transpose(rows: Sequence[Sequence]) -> list[Vector]:
    return [tuple(col) for col in zip(*rows)]


@dataclass(frozen=True)
class LinearMap:
    """Matrix of a linear map Q^source -> Q^target (``target`` rows)."""

    matrix: tuple
    source: int
    target: int

    def __post_init__(self):
        m = tuple(vec(r) for r in self.matrix)
        if len(m) != self.target or any(len(r) != self.source for r in m):
            raise AmbientMismatchError(
                f"matrix shape does not match {self.target}x{self.source}"
            )
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], source: int | None = None) -> "LinearMap":
        rows = [vec(r) for r in rows]
        if source is None:
            source = len(rows[0]) if rows else 0
        return cls(tuple(rows), source, len(rows))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], target: int | None = None) -> "LinearMap":
        cols = [vec(c) for c in cols]
        if target is None:
            target = len(cols[0]) if cols else 0
        rows = [tuple(c[i] for c in cols) for i in range(target)]
        return cls(tuple(rows), len(cols), target)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(tuple(unit(n, i) for i in range(n)), n, n)

    @classmethod
    def zero(cls, source: int, target: int) -> "LinearMap":
        return cls(tuple(zeros(source) for _ in range(target)), source, target)

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.matrix)

    def __call__(self, v: Sequence) -> Vector:
        if len(v) != self.source:
            raise AmbientMismatchError(f"vector of length {len(v)} for map from Q^{self.source}")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self.matrix)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self ∘ other``."""
        if other.target != self.source:
            raise AmbientMismatchError("composition dimension mismatch")
        cols = [self(other.column(j)) for j in range(other.source)]
        return LinearMap.from_columns(cols, self.target)

    def inverse(self) -> "LinearMap":
        n = self.source
        if self.target != n:
            raise PreconditionError("only square maps are invertible")
        aug = [list(r) + list(unit(n, i)) for i, r in enumerate(self.matrix)]
        red, pivots = rref(aug, 2 * n)
        if pivots[:n] != list(range(n)) or len(red) < n:
            raise PreconditionError("linear map is singular")
        return LinearMap(tuple(tuple(r[n:]) for r in red[:n]), n, n)

    def is_invertible(self) -> bool:
        return self.source == self.target and rank(self.matrix, self.source) == self.source

    def kernel(self) -> "Subspace":
        return Subspace.span(nullspace(self.matrix, self.source), self.source)

    def image(self) -> "Subspace":
        return Subspace.span([self.column(j) for j in range(self.source)], self.target)

    def is_zero(self) -> bool:
        return all(not x for r in self.matrix for x in r)


class Subspace:
    """A linear subspace of Q^n stored by its canonical RREF basis.

    Two subspaces are equal exactly when their RREF matrices coincide.
    """

    __slots__ = ("n", "basis", "pivots")

    def __init__(self, n: int, basis: tuple, pivots: tuple):
        self.n = n
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, vectors: Iterable[Sequence], n: int) -> "Subspace":
        vectors = [vec(v) for v in vectors]
        for v in vectors:
            if len(v) != n:
                raise AmbientMismatchError(f"vector of length {len(v)} in Q^{n}")
        red, pivots = rref(vectors, n)
        return cls(n, tuple(red), tuple(pivots))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, (), ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, tuple(unit(n, i) for i in range(n)), tuple(range(n)))

    @classmethod
    def coordinate(cls, n: int, axes: Iterable[int]) -> "Subspace":
        """Span of the standard basis vectors with the given 0-based indices."""
        return cls.span([unit(n, i) for i in sorted(set(axes))], n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.n == other.n
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.n, self.basis))

    def __repr__(self) -> str:
        rows = ["[" + ", ".join(str(x) for x in r) + "]" for r in self.basis]
        return f"Subspace(n={self.n}, basis=[{', '.join(rows)}])"

    def _check(self, other: "Subspace"):
        if self.n != other.n:
            raise AmbientMismatchError(f"subspaces of Q^{self.n} and Q^{other.n}")

    def contains(self, v: Sequence) -> bool:
        v = vec(v)
        if len(v) != self.n:
            raise AmbientMismatchError("vector length mismatch")
        # reduce v against the RREF basis
        w = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = w[p]
            if c:
                w = [a - c * b for a, b in zip(w, row)]
        return not any(w)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(list(self.basis) + list(other.basis), self.n)

    def annihilator(self) -> list[Vector]:
        """Basis of linear functionals vanishing on the subspace."""
        return nullspace(self.basis, self.n)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.n)
        eqs = self.annihilator() + other.annihilator()
        return Subspace.span(nullspace(eqs, self.n), self.n)

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersect(other)

    def is_zero(self) -> bool:
        return self.dim == 0

    def complement(self) -> "Subspace":
        """Pivot complement: span of the standard vectors on non-pivot columns."""
        piv = set(self.pivots)
        return Subspace.coordinate(self.n, [i for i in range(self.n) if i not in piv])

    def coordinates(self, v: Sequence) -> Vector:
        """Coefficients of ``v`` in the RREF basis (raises if ``v`` is outside)."""
        v = vec(v)
        if not self.contains(v):
            raise PreconditionError("vector does not lie in the subspace")
        return tuple(v[p] for p in self.pivots)

    def inclusion(self) -> LinearMap:
        """Q^dim -> Q^n sending the i-th unit vector to the i-th basis vector."""
        return LinearMap.from_columns(self.basis, self.n) if self.basis else LinearMap.zero(0, self.n)

    def image(self, f: LinearMap) -> "Subspace":
        if f.source != self.n:
            raise AmbientMismatchError("map source does not match subspace ambient")
        return Subspace.span([f(b) for b in self.basis], f.target)

    def preimage(self, f: LinearMap) -> "Subspace":
        if f.target != self.n:
            raise AmbientMismatchError("map target does not match subspace ambient")
        ann = self.annihilator()
        eqs = [
            tuple(sum((a[i] * f.matrix[i][j] for i in range(f.target)), Fraction(0)) for j in range(f.source))
            for a in ann
        ]
        return Subspace.span(nullspace(eqs, f.source), f.source)

    def is_complement(self, other: "Subspace") -> bool:
        """True when Q^n is the direct sum of the two subspaces."""
        self._check(other)
        return self.dim + other.dim == self.n and (self + other).dim == self.n

    def to_rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.basis]


def direct_sum_projections(a: Subspace, b: Subspace) -> tuple[LinearMap, LinearMap]:
    """For Q^n = a ⊕ b, the coordinate maps v ↦ (coords in a) and v ↦ (coords in b)."""
    if not a.is_complement(b):
        raise PreconditionError("subspaces are not complementary")
    n = a.n
    joint = LinearMap.from_columns(list(a.basis) + list(b.basis), n)
    inv = joint.inverse()
    rows = inv.matrix
    pa = LinearMap(tuple(rows[: a.dim]), n, a.dim)
    pb = LinearMap(tuple(rows[a.dim:]), n, b.dim)
    return pa, pb
