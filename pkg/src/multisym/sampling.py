"""Seeded generators for randomized checks."""
from __future__ import annotations

import random
from fractions import Fraction

from .exterior import FORM, VECTOR
from .fields import PolyAltField, d, random_field, solve_constant_flat
from .hamiltonian import GradedClass, hamiltonian_class
from .linalg import LinearMap, Subspace


def random_vector(n: int, rng: random.Random, lo: int = -3, hi: int = 3) -> list[Fraction]:
    return [Fraction(rng.randint(lo, hi)) for _ in range(n)]


def random_subspace(n: int, rng: random.Random, dim: int | None = None) -> Subspace:
    if dim is None:
        dim = rng.randint(0, n)
    return Subspace.span([random_vector(n, rng) for _ in range(dim)], n)


def random_invertible(n: int, rng: random.Random, lo: int = -2, hi: int = 2) -> LinearMap:
    while True:
        rows = [[Fraction(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)]
        G = LinearMap.from_rows(rows, n)
        if G.is_invertible():
            return G


def hamiltonian_field(
    omega: PolyAltField, q: int, rng: random.Random, max_degree: int = 3, tries: int = 200
) -> tuple[PolyAltField, PolyAltField]:
    """A nonzero q-vector field U with ι_U ω = dγ, and the potential γ.

    γ is a random (k-q)-form whose coefficients have degree ≤ max_degree + 1,
    so U has coefficient degree ≤ max_degree when ω is constant.
    """
    n = omega.nvars
    k = omega.degree - 1
    for _ in range(tries):
        gamma = random_field(n, k - q, FORM, max_degree + 1, rng)
        dg = d(gamma)
        if dg.is_zero():
            continue
        U = solve_constant_flat(omega, dg, q)
        if U is not None and not U.is_zero():
            return U, gamma
    raise RuntimeError(f"no Hamiltonian {q}-vector field found for this form")


def hamiltonian_random_class(
    omega: PolyAltField, q: int, rng: random.Random, max_degree: int = 2
) -> GradedClass:
    """Class of a Hamiltonian (k-q)-form with its q-vector witness."""
    U, gamma = hamiltonian_field(omega, q, rng, max_degree)
    return hamiltonian_class(gamma, omega, U)


def random_vector_field(n: int, q: int, rng: random.Random, max_degree: int = 2) -> PolyAltField:
    return random_field(n, q, VECTOR, max_degree, rng)
