"""Multisymplectic vector spaces: flat maps, j-th orthogonals, subspace classes."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .exterior import (
    FORM,
    AltElement,
    basis_indices,
    contract,
    contraction_matrix,
    decomposable,
    pullback,
)
from .linalg import (
    AmbientMismatchError,
    DegreeError,
    LinearMap,
    PreconditionError,
    Subspace,
    nullspace,
)


class MSpace:
    """A multisymplectic vector space (Q^n, ω) of order k = deg ω - 1.

    Closedness is automatic for constant-coefficient forms, and degenerate
    forms are allowed.
    """

    def __init__(self, omega: AltElement):
        if omega.variance != FORM:
            raise AmbientMismatchError("ω must be a form")
        if omega.degree < 1:
            raise DegreeError("ω must have degree at least 1")
        self.omega = omega
        self.n = omega.n
        self.k = omega.degree - 1
        self._flat: dict[int, LinearMap] = {}
        self._kernel: Subspace | None = None

    def __repr__(self) -> str:
        return f"MSpace(n={self.n}, k={self.k})"

    def flat(self, q: int) -> LinearMap:
        """Matrix of ♭_q : Λ^q V → Λ^{k+1-q} V*, u ↦ ι_u ω, in lexicographic bases."""
        if not 1 <= q <= self.k + 1:
            raise DegreeError(f"q must lie in 1..{self.k + 1}, got {q}")
        cached = self._flat.get(q)
        if cached is not None:
            return cached
        mat = contraction_matrix(self.omega, q)
        ncols = len(basis_indices(self.n, q))
        fmap = LinearMap(tuple(mat), ncols, len(mat))
        # write-once: concurrent builders compute the same value
        return self._flat.setdefault(q, fmap)

    def kernel_flat1(self) -> Subspace:
        if self._kernel is None:
            self._kernel = self.flat(1).kernel()
        return self._kernel

    def is_regular(self) -> bool:
        return self.kernel_flat1().is_zero()

    def full(self) -> Subspace:
        return Subspace.full(self.n)

    def subspace(self, vectors: Sequence[Sequence]) -> Subspace:
        return Subspace.span(vectors, self.n)


def flat(ms: MSpace, q: int) -> LinearMap:
    return ms.flat(q)


def _check_ambient(ms: MSpace, W: Subspace):
    if W.n != ms.n:
        raise AmbientMismatchError(f"subspace of Q^{W.n} in a space of dimension {ms.n}")


def orthogonal(ms: MSpace, W: Subspace, j: int) -> Subspace:
    """W^{⊥,j} = {v : ι_{v∧w_1∧…∧w_j} ω = 0 for all w_i ∈ W}."""
    _check_ambient(ms, W)
    if not 1 <= j <= ms.k:
        raise DegreeError(f"j must lie in 1..{ms.k}, got {j}")
    if j > W.dim:
        return Subspace.full(ms.n)
    rows: list[tuple] = []
    for combo in combinations(W.basis, j):
        beta = contract(decomposable(combo), ms.omega)
        if beta.is_zero():
            continue
        rows.extend(contraction_matrix(beta, 1))
    if not rows:
        return Subspace.full(ms.n)
    return Subspace.span(nullspace(rows, ms.n), ms.n)


@dataclass(frozen=True)
class SubspaceClass:
    j: int
    is_j_isotropic: bool
    is_j_coisotropic: bool
    is_j_lagrangian: bool
    is_nondegenerate: bool
    orthogonal: Subspace = field(compare=False, repr=False)

    def as_dict(self) -> dict:
        return {
            "j": self.j,
            "isotropic": self.is_j_isotropic,
            "coisotropic": self.is_j_coisotropic,
            "lagrangian": self.is_j_lagrangian,
            "nondegenerate": self.is_nondegenerate,
        }


def classify(ms: MSpace, W: Subspace, j: int) -> SubspaceClass:
    """Classify W; ker ♭₁ is absorbed as in the degenerate-case definitions.

    Lagrangian is the double inclusion W^{⊥,j} ⊆ W + ker ♭₁ and
    W ⊆ W^{⊥,j} + ker ♭₁.
    """
    _check_ambient(ms, W)
    perp = orthogonal(ms, W, j)
    ker = ms.kernel_flat1()
    iso = W.issubspace(perp)
    coiso = perp.issubspace(W + ker)
    lag = coiso and W.issubspace(perp + ker)
    nondeg = (W & orthogonal(ms, W, 1)).is_zero() if ms.k >= 1 else True
    return SubspaceClass(j, iso, coiso, lag, nondeg, perp)


def is_k_isotropic_via_pullback(ms: MSpace, W: Subspace) -> bool:
    _check_ambient(ms, W)
    return pullback(W.inclusion(), ms.omega).is_zero()


def orthogonal_properties_check(ms: MSpace, W1: Subspace, W2: Subspace, j: int) -> dict[str, bool]:
    """Per-clause report of the basic inclusions satisfied by j-th orthogonals."""
    _check_ambient(ms, W1)
    _check_ambient(ms, W2)
    V = ms.full()
    zero = Subspace.zero(ms.n)
    p1 = orthogonal(ms, W1, j)
    p2 = orthogonal(ms, W2, j)
    report = {
        "a": all(orthogonal(ms, zero, jj) == V for jj in range(1, ms.k + 1)),
        "b": orthogonal(ms, V, 1) == ms.kernel_flat1(),
        "c": orthogonal(ms, W1 + W2, j).issubspace(p1 & p2),
        "d": (p1 + p2).issubspace(orthogonal(ms, W1 & W2, j)),
        "e": orthogonal(ms, W1 + W2, 1).issubspace(orthogonal(ms, W1, 1) & orthogonal(ms, W2, 1)),
    }
    return report


@dataclass(frozen=True)
class DecompositionReport:
    u_lagrangian: bool
    w_lagrangian: bool
    u_class: SubspaceClass
    w_class: SubspaceClass

    @property
    def ok(self) -> bool:
        return self.u_lagrangian and self.w_lagrangian


def isotropic_decomposition_check(ms: MSpace, U: Subspace, W: Subspace) -> DecompositionReport:
    """For V = U ⊕ W with U k-isotropic and W 1-isotropic, confirm both are Lagrangian."""
    _check_ambient(ms, U)
    _check_ambient(ms, W)
    if not U.is_complement(W):
        raise PreconditionError("hypothesis failed: V is not the direct sum U ⊕ W")
    cu = classify(ms, U, ms.k)
    if not cu.is_j_isotropic:
        raise PreconditionError(f"hypothesis failed: U is not {ms.k}-isotropic")
    cw = classify(ms, W, 1)
    if not cw.is_j_isotropic:
        raise PreconditionError("hypothesis failed: W is not 1-isotropic")
    return DecompositionReport(cu.is_j_lagrangian, cw.is_j_lagrangian, cu, cw)


def witness_outside(sub: Subspace, big: Subspace):
    """A basis vector of ``big`` not lying in ``sub``, or None."""
    for b in big.basis:
        if not sub.contains(b):
            return b
    return None
