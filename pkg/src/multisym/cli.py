"""Command-line front end.

Exit codes: 0 success, 1 a verification claim failed, 2 invalid input,
3 a precondition failed, 4 a Hamiltonian witness does not match its form.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .exterior import VECTOR, format_alt
from .fields import FieldParseError, PolyAltField, format_field, is_closed, parse_field
from .hamiltonian import GradedClass, WitnessError, check_witness, graded_bracket
from .instances import InstanceParseError, canonical_instance, counterexample_instance, load
from .linalg import DegreeError, PreconditionError, Subspace
from .msym import classify
from .reduction import project_subspace, reduce

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_WITNESS = 4


def _basis_json(S: Subspace) -> list:
    return [[str(c) for c in b] for b in S.basis]


def _basis_text(S: Subspace) -> str:
    if S.is_zero():
        return "{0}"
    return "<" + ", ".join("(" + ", ".join(str(c) for c in b) + ")" for b in S.basis) + ">"


def _emit_json(path: str | None, payload) -> None:
    if not path:
        return
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _say(args, text: str) -> None:
    """Human-readable output; moves to stderr when JSON goes to stdout."""
    print(text, file=sys.stderr if getattr(args, "json", None) == "-" else sys.stdout)


def _yn(b: bool) -> str:
    return "true" if b else "false"


# subcommands ----------------------------------------------------------------

def cmd_classify(args) -> int:
    inst = load(args.instance)
    W = inst.subspace(args.subspace)
    j = args.j if args.j is not None else inst.k
    if not 1 <= j <= max(inst.k, 1):
        raise PreconditionError(f"j must lie in 1..{inst.k}")
    cls = classify(inst.ms, W, j)
    _say(args, f"subspace: {args.subspace} (dim {W.dim}), j = {j}")
    _say(args, f"isotropic: {_yn(cls.is_j_isotropic)}")
    _say(args, f"coisotropic: {_yn(cls.is_j_coisotropic)}, orthogonal: {_basis_text(cls.orthogonal)}")
    _say(args, f"{j}-Lagrangian: {_yn(cls.is_j_lagrangian)}")
    _say(args, f"nondegenerate: {_yn(cls.is_nondegenerate)}")
    out = cls.as_dict()
    out.update(subspace=args.subspace, dim=W.dim, orthogonal=_basis_json(cls.orthogonal))
    _emit_json(args.json, out)
    return EXIT_OK


def cmd_reduce(args) -> int:
    inst = load(args.instance)
    ms = inst.ms
    N = inst.subspace(args.subspace)
    j = args.j if args.j is not None else inst.k
    red = reduce(ms, N)
    _say(args, f"N = {args.subspace} (dim {N.dim}), K = N ∩ N^⊥{inst.k}: {_basis_text(red.K)}")
    _say(args, f"quotient dimension: {red.dim}")
    _say(args, f"reduced form: {format_alt(red.omega_N)}")
    projected = {}
    for name in args.project or []:
        L = inst.subspace(name)
        P = project_subspace(red, L)
        cls = classify(red.reduced, P, j)
        lifts = [red.lift(b) for b in P.basis]
        projected[name] = {
            "dim": P.dim,
            "basis": _basis_json(P),
            "lifted_basis": [[str(c) for c in v] for v in lifts],
            "classification": cls.as_dict(),
        }
        verdict = "" if cls.is_j_lagrangian else "NOT "
        _say(
            args,
            f"π({name} ∩ N) = {_basis_text(Subspace.span(lifts, ms.n))} in V, "
            f"{verdict}{j}-Lagrangian in the quotient"
        )
    _emit_json(
        args.json,
        {
            "quotient_dim": red.dim,
            "kernel": _basis_json(red.K),
            "omega_N": red.omega_N.to_records(),
            "projected_subspaces": projected,
        },
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import Options, run_claims

    report = run_claims(args.scope, Options(seed=args.seed, max_poly_degree=args.max_poly_degree))
    _say(args, report.table())
    _emit_json(args.json, report.to_json(timing=not args.no_timing))
    return EXIT_OK if report.ok else EXIT_FAIL


def _read_class(spec: dict, key: str, n: int, omega: PolyAltField, max_degree) -> tuple[GradedClass, PolyAltField]:
    if not isinstance(spec, dict) or "form" not in spec:
        raise InstanceParseError('needs a "form" entry', key)
    k = omega.degree - 1
    try:
        alpha = parse_field(str(spec["form"]), n, max_degree=max_degree)
    except FieldParseError as exc:
        raise InstanceParseError(str(exc), key + ".form") from None
    if "degree" in spec:
        deg = spec["degree"]
        if not isinstance(deg, int) or not 0 <= deg <= k - 1:
            raise InstanceParseError(f"degree must lie in 0..{k - 1}", key + ".degree")
        if alpha.is_zero():
            alpha = PolyAltField.zero(n, deg)
        elif alpha.degree != deg:
            raise InstanceParseError(f"form has degree {alpha.degree}, declared {deg}", key + ".degree")
    q = k - alpha.degree
    w = spec.get("witness")
    if w is None:
        if not alpha.is_zero():
            raise InstanceParseError("a witness multivector field is required", key + ".witness")
        U = PolyAltField.zero(n, q, VECTOR)
    else:
        try:
            U = parse_field(str(w), n, variance=VECTOR, max_degree=max_degree)
        except FieldParseError as exc:
            raise InstanceParseError(str(exc), key + ".witness") from None
        if U.is_zero():
            U = PolyAltField.zero(n, q, VECTOR)
    try:
        check_witness(alpha, omega, U)
    except WitnessError as exc:
        raise WitnessError(f"{key}: {exc}") from None
    return GradedClass(k, alpha.degree, alpha, U), U


def cmd_bracket(args) -> int:
    try:
        data = json.loads(Path(args.forms).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InstanceParseError(str(exc.strerror or exc), args.forms) from None
    except json.JSONDecodeError as exc:
        raise InstanceParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(data, dict):
        raise InstanceParseError("top level must be an object", "$")
    for key in ("n", "omega", "a", "b"):
        if key not in data:
            raise InstanceParseError("missing field", key)
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise InstanceParseError("must be a positive integer", "n")
    try:
        omega = parse_field(str(data["omega"]), n)
    except FieldParseError as exc:
        raise InstanceParseError(str(exc), "omega") from None
    if omega.variance == VECTOR or omega.degree < 2:
        raise InstanceParseError("ω must be a form of degree at least 2", "omega")
    if not is_closed(omega):
        raise PreconditionError("ω is not closed")
    a, Ua = _read_class(data["a"], "a", n, omega, args.max_poly_degree)
    b, Ub = _read_class(data["b"], "b", n, omega, args.max_poly_degree)
    out = graded_bracket(a, b, omega, Ua, Ub, sign=data.get("sign", "right"))
    rep = "0" if out.rep is None or out.rep.is_zero() else format_field(out.rep)
    _say(args, f"deg a = {a.deg}, deg b = {b.deg}, deg {{a, b}} = {out.deg}")
    _say(args, f"representative: {rep}")
    _say(args, f"zero class: {_yn(out.is_zero())}")
    if out.witness is not None:
        _say(args, f"witness: {format_field(out.witness)}")
    _emit_json(
        args.json,
        {
            "deg_a": a.deg,
            "deg_b": b.deg,
            "deg": out.deg,
            "order": out.order,
            "representative": rep,
            "zero_class": out.is_zero(),
            "witness": format_field(out.witness) if out.witness is not None else None,
        },
    )
    return EXIT_OK


def cmd_instance(args) -> int:
    if args.name == "counterexample":
        inst = counterexample_instance()
    else:
        axes = [int(a) for a in args.e.split(",")] if args.e else []
        inst = canonical_instance(args.m, args.k, axes, args.r)
    text = inst.dumps()
    if args.json and args.json != "-":
        Path(args.json).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multisym", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify a named subspace of an instance")
    c.add_argument("--instance", required=True)
    c.add_argument("--subspace", required=True)
    c.add_argument("--j", type=int)
    c.add_argument("--json", help="write JSON to this path ('-' for stdout)")
    c.set_defaults(func=cmd_classify)

    r = sub.add_parser("reduce", help="reduce by a coisotropic subspace and project others")
    r.add_argument("--instance", required=True)
    r.add_argument("--subspace", required=True, help="the coisotropic subspace N")
    r.add_argument("--project", action="append", metavar="NAME", help="subspace to project (repeatable)")
    r.add_argument("--j", type=int, help="order used to classify projections (default k)")
    r.add_argument("--json")
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify-paper", help="run the claim suite")
    v.add_argument("--scope", help="regular expression selecting claim ids")
    v.add_argument("--json")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-poly-degree", type=int, default=3)
    v.add_argument("--no-timing", action="store_true", help="omit wall times from the JSON report")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bracket", help="graded bracket of two Hamiltonian forms")
    b.add_argument("forms", help="JSON file with n, omega, a and b")
    b.add_argument("--max-poly-degree", type=int)
    b.add_argument("--json")
    b.set_defaults(func=cmd_bracket)

    i = sub.add_parser("instance", help="print a built-in instance as JSON")
    i.add_argument("name", choices=["counterexample", "canonical"])
    i.add_argument("--m", type=int, default=3)
    i.add_argument("--k", type=int, default=2)
    i.add_argument("--e", help="comma-separated 1-based axes spanning E")
    i.add_argument("--r", type=int, default=0)
    i.add_argument("--json")
    i.set_defaults(func=cmd_instance)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceParseError, FieldParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except WitnessError as exc:
        print(f"witness error: {exc}", file=sys.stderr)
        return EXIT_WITNESS
    except (PreconditionError, DegreeError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
