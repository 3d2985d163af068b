"""JSON instances: {"n", "k", "omega": [records], "subspaces": {name: [[row], ...]}}."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exterior import FORM, AltElement, format_rational, normalize_index, parse_rational
from .linalg import Subspace
from .msym import MSpace


class InstanceParseError(ValueError):
    """Malformed instance; ``where`` names the offending field or line."""

    def __init__(self, message: str, where: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class Instance:
    n: int
    k: int
    omega: AltElement
    subspaces: dict = field(default_factory=dict)   # name -> list of Fraction rows, as given

    @property
    def ms(self) -> MSpace:
        return MSpace(self.omega)

    def subspace(self, name: str) -> Subspace:
        if name not in self.subspaces:
            known = ", ".join(sorted(self.subspaces)) or "none"
            raise InstanceParseError(f"unknown subspace {name!r} (known: {known})", f"subspaces.{name}")
        return Subspace.span(self.subspaces[name], self.n)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "omega": self.omega.to_records(),
            "subspaces": {
                name: [[format_rational(c) for c in row] for row in rows]
                for name, rows in sorted(self.subspaces.items())
            },
        }

    def dumps(self) -> str:
        """One record or row per line; the output is canonical for a given instance."""
        data = self.to_json()
        lines = ["{", f'  "n": {data["n"]},', f'  "k": {data["k"]},', '  "omega": [']
        recs = [json.dumps(r) for r in data["omega"]]
        lines += [f"    {r}," for r in recs[:-1]] + ([f"    {recs[-1]}"] if recs else [])
        lines.append("  ],")
        lines.append('  "subspaces": {')
        items = list(data["subspaces"].items())
        for t, (name, rows) in enumerate(items):
            comma = "," if t < len(items) - 1 else ""
            if not rows:
                lines.append(f"    {json.dumps(name)}: []{comma}")
                continue
            lines.append(f"    {json.dumps(name)}: [")
            body = [json.dumps(r) for r in rows]
            lines += [f"      {r}," for r in body[:-1]] + [f"      {body[-1]}"]
            lines.append("    ]" + comma)
        lines.append("  }")
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_model(cls, omega: AltElement, subspaces: dict) -> "Instance":
        subs = {}
        for name, S in subspaces.items():
            rows = S.basis if isinstance(S, Subspace) else S
            subs[name] = [[Fraction(c) for c in row] for row in rows]
        return cls(omega.n, omega.degree - 1, omega, subs)


def _rational(value, where: str) -> Fraction:
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InstanceParseError(f"not a rational number: {value!r} ({exc})", where) from None


def parse_instance(data) -> Instance:
    """Validate and convert decoded JSON into an Instance."""
    if not isinstance(data, dict):
        raise InstanceParseError("top level must be an object", "$")
    for key in ("n", "k", "omega"):
        if key not in data:
            raise InstanceParseError("missing field", key)
    n, k = data["n"], data["k"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InstanceParseError("must be a positive integer", "n")
    if not isinstance(k, int) or isinstance(k, bool) or not 0 <= k < n:
        raise InstanceParseError(f"must be an integer in 0..{n - 1}", "k")
    recs = data["omega"]
    if not isinstance(recs, list):
        raise InstanceParseError("must be a list of records", "omega")
    terms: dict = {}
    for i, rec in enumerate(recs):
        where = f"omega[{i}]"
        if not isinstance(rec, dict) or "idx" not in rec or "coef" not in rec:
            raise InstanceParseError('record needs "idx" and "coef"', where)
        idx = rec["idx"]
        if not isinstance(idx, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in idx):
            raise InstanceParseError("idx must be a list of integers", where + ".idx")
        if len(idx) != k + 1:
            raise InstanceParseError(f"idx has length {len(idx)}, expected k+1 = {k + 1}", where + ".idx")
        if any(not 1 <= x <= n for x in idx):
            raise InstanceParseError(f"index out of range 1..{n}", where + ".idx")
        s, key = normalize_index(idx)
        c = _rational(rec["coef"], where + ".coef")
        if s:
            terms[key] = terms.get(key, Fraction(0)) + s * c
    omega = AltElement(n, k + 1, terms, FORM)
    subs_raw = data.get("subspaces", {})
    if not isinstance(subs_raw, dict):
        raise InstanceParseError("must be an object", "subspaces")
    subs = {}
    for name, rows in subs_raw.items():
        where = f"subspaces.{name}"
        if not isinstance(rows, list):
            raise InstanceParseError("must be a list of rows", where)
        out = []
        for r, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != n:
                raise InstanceParseError(f"row must have {n} entries", f"{where}[{r}]")
            out.append([_rational(c, f"{where}[{r}][{j}]") for j, c in enumerate(row)])
        subs[name] = out
    return Instance(n, k, omega, subs)


def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return parse_instance(data)


def load(path) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceParseError(str(exc.strerror or exc), str(path)) from None
    return loads(text)


def counterexample_instance() -> Instance:
    """The 6-dimensional reduction counterexample with subspaces N, L, LN and W."""
    from .reduction import counterexample

    ce = counterexample()
    model = ce["model"]
    return Instance.from_model(
        ce["ms"].omega,
        {"N": ce["N"], "L": ce["L"], "LN": ce["LN"], "W": model.W, "zero": []},
    )


def canonical_instance(m: int, k: int, e_axes=(), r: int = 0) -> Instance:
    """Canonical model L ⊕ Λ^k_r L* with coordinate E, exposing L and W."""
    from .canonical import VerticalData, build_canonical

    model = build_canonical(VerticalData.coordinate(m, e_axes, r), k)
    return Instance.from_model(model.omega, {"L": model.L, "W": model.W})
