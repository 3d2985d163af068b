"""Exact multisymplectic linear algebra, canonical models and coisotropic reduction."""
from .exterior import (
    FORM,
    VECTOR,
    AltElement,
    contract,
    evaluate,
    pullback,
    pushforward,
    wedge,
)
from .kernels import BACKEND
from .linalg import (
    AmbientMismatchError,
    DegreeError,
    LinearMap,
    PreconditionError,
    Subspace,
)
from .msym import MSpace, classify, flat, orthogonal

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "FORM",
    "VECTOR",
    "AltElement",
    "AmbientMismatchError",
    "DegreeError",
    "LinearMap",
    "MSpace",
    "PreconditionError",
    "Subspace",
    "classify",
    "contract",
    "evaluate",
    "flat",
    "orthogonal",
    "pullback",
    "pushforward",
    "wedge",
]
