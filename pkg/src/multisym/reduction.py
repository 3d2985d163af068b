"""Linear coisotropic reduction N → N/(N ∩ N^{⊥,k})."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exterior import AltElement, contract, decomposable, pullback
from .linalg import LinearMap, PreconditionError, Subspace, unit
from .msym import MSpace, SubspaceClass, classify, orthogonal, witness_outside


@dataclass(frozen=True)
class ReducedSpace:
    ms: MSpace
    N: Subspace
    K: Subspace             # N ∩ N^{⊥,k}, in ambient coordinates
    dim: int
    projection: LinearMap   # N coordinates -> quotient coordinates
    section: LinearMap      # quotient coordinates -> N coordinates
    omega_N: AltElement

    @property
    def reduced(self) -> MSpace:
        return MSpace(self.omega_N)

    def project(self, v: Sequence) -> tuple:
        """Quotient coordinates of an ambient vector lying in N."""
        return self.projection(self.N.coordinates(v))

    def lift(self, x: Sequence) -> tuple:
        """Ambient representative of a quotient vector."""
        return self.N.inclusion()(self.section(x))


def _pivot_projection(Kc: Subspace) -> tuple[LinearMap, LinearMap]:
    """Projection and section for Q^d → Q^d/Kc using the non-pivot coordinates of Kc."""
    d = Kc.n
    piv = set(Kc.pivots)
    free = [c for c in range(d) if c not in piv]
    rows = []
    for c in free:
        row = [Fraction(0)] * d
        row[c] = Fraction(1)
        for kb, p in zip(Kc.basis, Kc.pivots):
            row[p] -= kb[c]
        rows.append(tuple(row))
    proj = LinearMap(tuple(rows), d, len(free))
    sec = LinearMap.from_columns([unit(d, c) for c in free], d) if free else LinearMap.zero(0, d)
    return proj, sec


def reduce(ms: MSpace, N: Subspace, section: LinearMap | None = None) -> ReducedSpace:
    """Quotient of a k-coisotropic N by K = N ∩ N^{⊥,k} with π*ω_N = i*ω.

    ``section`` may replace the default pivot section by any right inverse of
    the projection; ω_N does not depend on that choice.
    """
    k = ms.k
    cls = classify(ms, N, k)
    if not cls.is_j_coisotropic:
        bad = witness_outside(N + ms.kernel_flat1(), cls.orthogonal)
        raise PreconditionError(
            f"N is not {k}-coisotropic: N^⊥{k} ⊄ N + ker ♭₁ (offending vector {list(map(str, bad))})"
        )
    K = N & cls.orthogonal
    d = N.dim
    Kc = Subspace.span([N.coordinates(v) for v in K.basis], d)
    proj, sec = _pivot_projection(Kc)
    if section is not None:
        if section.source != proj.target or section.target != d:
            raise PreconditionError("section has the wrong shape")
        if proj.compose(section).matrix != LinearMap.identity(proj.target).matrix:
            raise PreconditionError("section is not a right inverse of the projection")
        sec = section
    i_omega = pullback(N.inclusion(), ms.omega)
    for kb in Kc.basis:
        if i_omega.degree and not contract(AltElement.from_vector(kb), i_omega).is_zero():
            raise AssertionError("induced form is not well defined: K is not in the kernel of i*ω")
    omega_N = pullback(sec, i_omega)
    if pullback(proj, omega_N) != i_omega:
        raise AssertionError("π*ω_N ≠ i*ω")
    return ReducedSpace(ms, N, K, proj.target, proj, sec, omega_N)


def project_subspace(red: ReducedSpace, L: Subspace) -> Subspace:
    """π(L ∩ N) in quotient coordinates."""
    LN = L & red.N
    return Subspace.span([red.project(v) for v in LN.basis], red.dim)


@dataclass(frozen=True)
class ProjectionReport:
    projected: Subspace
    cls: SubspaceClass
    witness: tuple | None   # ambient representative in π(L∩N)^⊥j but outside π(L∩N)

    @property
    def is_lagrangian(self) -> bool:
        return self.cls.is_j_lagrangian


def lagrangian_projection_test(red: ReducedSpace, L: Subspace, j: int) -> ProjectionReport:
    """Classify π(L ∩ N) in the reduced space; nothing forces it to be Lagrangian."""
    if not classify(red.ms, L, j).is_j_lagrangian:
        raise PreconditionError(f"L is not {j}-Lagrangian in the ambient space")
    P = project_subspace(red, L)
    rms = red.reduced
    cls = classify(rms, P, j)
    wit = None
    if not cls.is_j_coisotropic:
        span = P + rms.kernel_flat1()
        outside = [red.lift(b) for b in cls.orthogonal.basis if not span.contains(b)]
        wit = min(outside, key=lambda x: sum(1 for c in x if c))
    return ProjectionReport(P, cls, wit)


def coisotropic_ideal_check(ms: MSpace, N: Subspace, samples: int = 20, seed: int = 0) -> dict:
    """i*(ι_{v∧w} ω) = 0 on N for v ∈ N^{⊥,k}, w ∈ N, on random combinations."""
    k = ms.k
    if not classify(ms, N, k).is_j_coisotropic:
        raise PreconditionError(f"N is not {k}-coisotropic")
    perp = orthogonal(ms, N, k)
    inc = N.inclusion()
    rng = random.Random(seed)
    checked = 0
    failures = []
    if perp.dim and N.dim:
        for _ in range(samples):
            v = _combo(perp, rng)
            w = _combo(N, rng)
            beta = contract(decomposable([v, w]), ms.omega)
            if not pullback(inc, beta).is_zero():
                failures.append((v, w))
            checked += 1
    return {"checked": checked, "vacuous": perp.dim == 0, "failures": failures, "ok": not failures}


def _combo(S: Subspace, rng: random.Random) -> tuple:
    out = [Fraction(0)] * S.n
    for b in S.basis:
        c = rng.randint(-3, 3)
        out = [x + c * y for x, y in zip(out, b)]
    return tuple(out)


def counterexample() -> dict:
    """The 6-dimensional instance where π(L ∩ N) fails to be 2-Lagrangian.

    Axes are ordered l1, l2, l3, a12, a13, a23 and
    Ω = a12∧l¹∧l² + a13∧l¹∧l³ + a23∧l²∧l³.
    """
    from .canonical import VerticalData, build_canonical

    model = build_canonical(VerticalData.build(3), 2)
    ms = model.ms

    def v(**kw):
        names = ["l1", "l2", "l3", "a12", "a13", "a23"]
        return [kw.get(nm, 0) for nm in names]

    N = ms.subspace([v(l1=1, l2=1), v(l1=1, a23=1), v(l2=1, a13=1), v(l3=1), v(a12=1)])
    return {
        "model": model,
        "ms": ms,
        "N": N,
        "L": model.L,
        "LN": ms.subspace([v(l1=1, l2=1), v(l3=1)]),
        "witness": tuple(Fraction(x) for x in v(a12=1)),
    }
