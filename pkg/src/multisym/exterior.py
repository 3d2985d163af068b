"""Sparse exterior algebra over the rationals.

An :class:`AltElement` is a sparse map from multi-indices (strictly increasing
tuples of 1-based axes) to rational coefficients, tagged as a form (covariant,
an element of Λ^p V*) or a multivector (contravariant, Λ^p V).  Forms are
evaluated with the determinant convention, so ``(e^1∧e^2)(e_1, e_2) = 1``, and
contraction puts the multivector in the leading slots:
``ι_{v_1∧…∧v_q} ω = ω(v_1, …, v_q, ·, …)``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from .kernels import contract_terms, merge_sign, wedge_terms
from .linalg import (
    AmbientMismatchError,
    DegreeError,
    LinearMap,
    as_fraction,
)

FORM = "form"
VECTOR = "vector"
_VARIANCES = (FORM, VECTOR)

MultiIndex = tuple  # tuple[int, ...], strictly increasing, 1-based


def basis_indices(n: int, p: int) -> list[MultiIndex]:
    """All degree-p multi-indices on n axes in lexicographic order."""
    if p < 0 or p > n:
        return []
    return list(combinations(range(1, n + 1), p))


def index_position(n: int, p: int) -> dict:
    return {I: i for i, I in enumerate(basis_indices(n, p))}


def normalize_index(idx: Sequence[int]) -> tuple[int, MultiIndex | None]:
    """Sort an index sequence; returns (sign, sorted) or (0, None) on repeats."""
    idx = list(idx)
    sign = 1
    # insertion sort counting transpositions; sequences are short
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, None
    return sign, tuple(idx)


class AltElement:
    """Immutable sparse alternating tensor over Q."""

    __slots__ = ("n", "degree", "variance", "terms", "_hash")

    def __init__(self, n: int, degree: int, terms: Mapping | None = None, variance: str = FORM):
        if variance not in _VARIANCES:
            raise ValueError(f"unknown variance {variance!r}")
        if degree < 0:
            raise DegreeError("negative degree")
        clean = {}
        for key, c in (terms or {}).items():
            s, k = normalize_index(key)
            if s == 0:
                continue
            if len(k) != degree:
                raise DegreeError(f"index {key} has length {len(k)}, expected {degree}")
            if k and (k[0] < 1 or k[-1] > n):
                raise AmbientMismatchError(f"index {key} out of range 1..{n}")
            c = as_fraction(c)
            if s < 0:
                c = -c
            clean[k] = clean.get(k, Fraction(0)) + c
        self.n = n
        self.degree = degree
        self.variance = variance
        self.terms = {k: v for k, v in clean.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, n, degree, terms, variance):
        obj = cls.__new__(cls)
        obj.n = n
        obj.degree = degree
        obj.variance = variance
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, n: int, degree: int, variance: str = FORM) -> "AltElement":
        return cls._raw(n, degree, {}, variance)

    @classmethod
    def scalar(cls, n: int, value, variance: str = FORM) -> "AltElement":
        v = as_fraction(value)
        return cls._raw(n, 0, {(): v} if v else {}, variance)

    @classmethod
    def basis(cls, n: int, idx: Sequence[int], variance: str = FORM, coef=1) -> "AltElement":
        return cls(n, len(idx), {tuple(idx): coef}, variance)

    @classmethod
    def from_vector(cls, v: Sequence, variance: str = VECTOR) -> "AltElement":
        n = len(v)
        return cls._raw(
            n, 1, {(i + 1,): as_fraction(c) for i, c in enumerate(v) if c}, variance
        )

    @classmethod
    def from_coefficients(cls, n: int, degree: int, coeffs: Sequence, variance: str = FORM) -> "AltElement":
        """Inverse of :meth:`coefficients` (lexicographic basis order)."""
        idx = basis_indices(n, degree)
        if len(coeffs) != len(idx):
            raise AmbientMismatchError("coefficient vector has the wrong length")
        return cls._raw(
            n, degree, {I: as_fraction(c) for I, c in zip(idx, coeffs) if c}, variance
        )

    # basic protocol -----------------------------------------------------
    def coefficient(self, idx: Sequence[int]) -> Fraction:
        s, k = normalize_index(idx)
        if s == 0:
            return Fraction(0)
        return s * self.terms.get(k, Fraction(0))

    def coefficients(self) -> tuple:
        """Dense coefficient vector in the lexicographic basis."""
        return tuple(self.terms.get(I, Fraction(0)) for I in basis_indices(self.n, self.degree))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AltElement):
            return NotImplemented
        return (
            self.n == other.n
            and self.degree == other.degree
            and self.variance == other.variance
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.degree, self.variance, frozenset(self.terms.items())))
        return self._hash

    def _same_space(self, other: "AltElement"):
        if self.n != other.n or self.variance != other.variance:
            raise AmbientMismatchError(
                f"ambient mismatch: ({self.n}, {self.variance}) vs ({other.n}, {other.variance})"
            )

    def __add__(self, other: "AltElement") -> "AltElement":
        self._same_space(other)
        if self.degree != other.degree:
            raise DegreeError("cannot add elements of different degree")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return AltElement._raw(self.n, self.degree, {k: v for k, v in out.items() if v}, self.variance)

    def __neg__(self) -> "AltElement":
        return AltElement._raw(self.n, self.degree, {k: -v for k, v in self.terms.items()}, self.variance)

    def __sub__(self, other: "AltElement") -> "AltElement":
        return self + (-other)

    def scale(self, c) -> "AltElement":
        c = as_fraction(c)
        if not c:
            return AltElement.zero(self.n, self.degree, self.variance)
        return AltElement._raw(self.n, self.degree, {k: c * v for k, v in self.terms.items()}, self.variance)

    def __mul__(self, c) -> "AltElement":
        if isinstance(c, AltElement):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __xor__(self, other: "AltElement") -> "AltElement":
        return wedge(self, other)

    def __repr__(self) -> str:
        return f"AltElement(n={self.n}, degree={self.degree}, {self.variance}, {format_alt(self)})"

    # serialization ------------------------------------------------------
    def to_records(self) -> list[dict]:
        return [
            {"idx": list(k), "coef": format_rational(v)} for k, v in sorted(self.terms.items())
        ]

    @classmethod
    def from_records(cls, n: int, records: Iterable[Mapping], variance: str = FORM, degree: int | None = None) -> "AltElement":
        records = list(records)
        if degree is None:
            if not records:
                raise DegreeError("degree must be given for an empty record list")
            degree = len(records[0]["idx"])
        terms: dict = {}
        for rec in records:
            s, k = normalize_index(rec["idx"])
            if s == 0:
                continue
            terms[k] = terms.get(k, Fraction(0)) + s * parse_rational(rec["coef"])
        return cls(n, degree, terms, variance)


def format_rational(x: Fraction) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        raise ValueError("floating-point coefficients are not accepted")
    return Fraction(str(s).strip())


def format_alt(a: AltElement) -> str:
    if not a.terms:
        return "0"
    sym = "e" if a.variance == VECTOR else "dx"
    parts = []
    for k, v in sorted(a.terms.items()):
        basis = "^".join(f"{sym}{i}" for i in k) or "1"
        parts.append(f"{v} {basis}")
    return " + ".join(parts)


# core operations --------------------------------------------------------

def wedge(a: AltElement, b: AltElement) -> AltElement:
    """Exterior product; zero of degree p+q when p+q exceeds n."""
    a._same_space(b)
    deg = a.degree + b.degree
    if deg > a.n:
        return AltElement._raw(a.n, deg, {}, a.variance)
    return AltElement._raw(a.n, deg, wedge_terms(a.terms, b.terms), a.variance)


def wedge_all(elements: Sequence[AltElement], n: int | None = None, variance: str = VECTOR) -> AltElement:
    if not elements:
        if n is None:
            raise ValueError("ambient dimension required for an empty product")
        return AltElement.scalar(n, 1, variance)
    out = elements[0]
    for e in elements[1:]:
        out = wedge(out, e)
    return out


def decomposable(vectors: Sequence[Sequence], variance: str = VECTOR) -> AltElement:
    """v_1 ∧ … ∧ v_q for explicit coordinate vectors."""
    return wedge_all([AltElement.from_vector(v, variance) for v in vectors], variance=variance)


def contract(u: AltElement, w: AltElement) -> AltElement:
    """Interior product ι_u w of a multivector into a form (or a form into a multivector)."""
    if u.n != w.n:
        raise AmbientMismatchError(f"ambient dimensions {u.n} and {w.n} differ")
    if u.variance == w.variance:
        raise AmbientMismatchError("contraction needs one form and one multivector")
    if u.degree > w.degree:
        raise DegreeError(f"cannot contract degree {u.degree} into degree {w.degree}")
    return AltElement._raw(w.n, w.degree - u.degree, contract_terms(u.terms, w.terms), w.variance)


def pairing(u: AltElement, w: AltElement) -> Fraction:
    """Full contraction ⟨w, u⟩ of equal-degree elements."""
    if u.degree != w.degree:
        raise DegreeError("full contraction needs equal degrees")
    return contract(u, w).terms.get((), Fraction(0))


def evaluate(omega: AltElement, *vectors: Sequence) -> Fraction:
    """Alternating multilinear evaluation ω(v_1, …, v_p)."""
    if omega.variance != FORM:
        raise AmbientMismatchError("only forms can be evaluated on vectors")
    if len(vectors) != omega.degree:
        raise TypeError(f"a {omega.degree}-form takes {omega.degree} vectors, got {len(vectors)}")
    for v in vectors:
        if len(v) != omega.n:
            raise AmbientMismatchError("vector length does not match the ambient dimension")
    if omega.degree == 0:
        return omega.terms.get((), Fraction(0))
    total = Fraction(0)
    cols = [[as_fraction(x) for x in v] for v in vectors]
    for idx, c in omega.terms.items():
        total += c * _det([[cols[j][i - 1] for j in range(len(cols))] for i in idx])
    return total


def _det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    a = [row[:] for row in m]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        piv = a[c][c]
        det *= piv
        for r in range(c + 1, n):
            f = a[r][c] / piv
            if f:
                for j in range(c, n):
                    a[r][j] -= f * a[c][j]
    return det


def _linear_images(f: LinearMap, transpose: bool, variance: str) -> list[AltElement]:
    """Images of the degree-1 basis elements under f* (transpose) or f_*."""
    if transpose:
        # f*(e^i) = sum_j F[i][j] e^j on the source
        return [
            AltElement._raw(f.source, 1, {(j + 1,): c for j, c in enumerate(row) if c}, variance)
            for row in f.matrix
        ]
    return [
        AltElement._raw(f.target, 1, {(i + 1,): f.matrix[i][j] for i in range(f.target) if f.matrix[i][j]}, variance)
        for j in range(f.source)
    ]


def _transport(elem: AltElement, images: list[AltElement], n_out: int) -> AltElement:
    if elem.degree == 0:
        return AltElement._raw(n_out, 0, dict(elem.terms), elem.variance)
    out: dict = {}
    cache: dict = {}
    for idx, c in elem.terms.items():
        # reuse products of shared prefixes
        acc = None
        for t in range(1, len(idx) + 1):
            pre = idx[:t]
            if pre in cache:
                acc = cache[pre]
                continue
            acc = images[pre[0] - 1] if t == 1 else wedge(acc, images[pre[-1] - 1])
            cache[pre] = acc
        for k, v in acc.terms.items():
            out[k] = out.get(k, Fraction(0)) + c * v
    return AltElement._raw(n_out, elem.degree, {k: v for k, v in out.items() if v}, elem.variance)


def pullback(f: LinearMap, omega: AltElement) -> AltElement:
    """(f*ω)(v_1, …) = ω(f v_1, …) for f: Q^m → Q^n."""
    if omega.variance != FORM:
        raise AmbientMismatchError("pullback acts on forms")
    if omega.n != f.target:
        raise AmbientMismatchError(f"form on Q^{omega.n} pulled back along map into Q^{f.target}")
    if omega.degree > f.source:
        return AltElement.zero(f.source, omega.degree, FORM)
    return _transport(omega, _linear_images(f, True, FORM), f.source)


def pushforward(f: LinearMap, u: AltElement) -> AltElement:
    """Λ^p f applied to a multivector on the source."""
    if u.variance != VECTOR:
        raise AmbientMismatchError("pushforward acts on multivectors")
    if u.n != f.source:
        raise AmbientMismatchError(f"multivector on Q^{u.n} pushed along map from Q^{f.source}")
    if u.degree > f.target:
        return AltElement.zero(f.target, u.degree, VECTOR)
    return _transport(u, _linear_images(f, False, VECTOR), f.target)


def contraction_matrix(beta: AltElement, q: int = 1) -> list[tuple]:
    """Matrix (rows: basis of degree p-q, cols: basis of degree q) of u ↦ ι_u β."""
    n = beta.n
    rows_idx = index_position(n, beta.degree - q)
    cols = basis_indices(n, q)
    mat = [[Fraction(0)] * len(cols) for _ in range(len(rows_idx))]
    for j, J in enumerate(cols):
        img = contract_terms({J: Fraction(1)}, beta.terms)
        for k, v in img.items():
            mat[rows_idx[k]][j] = v
    return [tuple(r) for r in mat]


def dim_exterior(n: int, p: int) -> int:
    return comb(n, p) if 0 <= p <= n else 0


__all__ = [
    "FORM",
    "VECTOR",
    "AltElement",
    "LinearMap",
    "basis_indices",
    "index_position",
    "normalize_index",
    "wedge",
    "wedge_all",
    "decomposable",
    "contract",
    "pairing",
    "evaluate",
    "pullback",
    "pushforward",
    "contraction_matrix",
    "format_rational",
    "parse_rational",
    "format_alt",
    "dim_exterior",
    "merge_sign",
]
