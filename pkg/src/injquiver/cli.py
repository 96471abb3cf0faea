"""Command-line front end.

Every subcommand reads JSON, runs one computation and emits a versioned
report.  Exit codes: 0 for a definite answer, 2 when the answer is Unknown,
1 for bad input or unsupported shapes, 3 when a budget is exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .certificate import to_jsonable
from .errors import DEFAULT_BUDGET, BudgetExceeded, InjQuiverError
from .ring.base import BaseRing

SCHEMA_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load(path: str) -> tuple[dict, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"parse error in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return obj, hashlib.sha256(raw).hexdigest()


def _ring(args) -> BaseRing | None:
    if not args.ring:
        return None
    try:
        return BaseRing.parse(args.ring)
    except Exception as exc:
        raise InputError(f"bad ring descriptor {args.ring!r}: {exc}") from exc


def _rep(args):
    from .rep.serialize import rep_from_json

    obj, digest = _load(args.input)
    return rep_from_json(obj, _ring(args)), digest


# -- subcommands: each returns (exit code, theorem, result) ---------------------

def cmd_classify(args):
    from .quiver import classify_source_injective, quiver_from_json, stratify

    obj, digest = _load(args.input)
    Q = quiver_from_json(obj)
    c = classify_source_injective(Q)
    result = {"classification": c.to_json(), "stratification": stratify(Q).to_json()}
    return (EXIT_OK if c.is_yes else EXIT_UNKNOWN), "sufficient conditions for source injective quivers", result, digest


def cmd_inject_test(args):
    from .injclass.local import LOCAL_PASS_UNKNOWN, local_injectivity_test
    from .rep.chain import ChainRep
    from .rep.finite import Representation

    X, digest = _rep(args)
    v = local_injectivity_test(X)
    result = {"verdict": v.to_json()}
    theorem = "local criterion: injective vertex modules and split source maps"
    if isinstance(X, ChainRep) and not X.reversed:
        from .injclass.ainf import ray_injectivity_test

        result["ray_criterion"] = ray_injectivity_test(X).to_json()
    if args.baer and isinstance(X, Representation) and X.quiver.is_acyclic():
        from .injclass.baer import baer_oracle

        result["baer_oracle"] = baer_oracle(X, args.budget).to_json()
    return (EXIT_UNKNOWN if v.overall == LOCAL_PASS_UNKNOWN else EXIT_OK), theorem, result, digest


def cmd_decompose(args):
    from .injclass.decompose import decompose_injective_tree

    X, digest = _rep(args)
    d = decompose_injective_tree(X)
    result = {"decomposition": d.to_json(), "rebuild": to_jsonable(d.rebuild), "isomorphism": to_jsonable(d.iso)}
    return EXIT_OK, "injectives on rooted trees are sums of e_* of vertices and vertices at infinity", result, digest


def cmd_dual(args):
    from .homdim import dual_representation, verify_duality

    X, digest = _rep(args)
    D = dual_representation(X)
    result = {"dual": to_jsonable(D), "check": verify_duality(X, args.budget).to_json()}
    return EXIT_OK, "character duality reverses arrows", result, digest


def cmd_flat_test(args):
    from .homdim import is_flat_representation

    X, digest = _rep(args)
    v = is_flat_representation(X)
    return EXIT_OK, "flat iff the character dual is injective", {"verdict": v.to_json()}, digest


def cmd_gorenstein(args):
    from .errors import UnsupportedQuiver
    from .homdim import gorenstein_flat_test, gorenstein_injective_test, gorenstein_projective_test

    X, digest = _rep(args)
    result = {}
    tests = {
        "injective": lambda: gorenstein_injective_test(X, witness=args.witness),
        "projective": lambda: gorenstein_projective_test(X),
        "flat": lambda: gorenstein_flat_test(X),
    }
    for name, run in tests.items():
        try:
            result[name] = run().to_json()
        except UnsupportedQuiver as exc:
            result[name] = {"unsupported": str(exc)}
    if all("unsupported" in r for r in result.values()):
        return EXIT_UNKNOWN, "local criteria for Gorenstein classes", result, digest
    return EXIT_OK, "local criteria for Gorenstein classes", result, digest


def cmd_dims(args):
    from .homdim import ginjdim_bound, injdim_representation

    X, digest = _rep(args)
    result = {"injdim": injdim_representation(X).to_json(), "ginjdim": ginjdim_bound(X).to_json()}
    return EXIT_OK, "injective dimension bounded by vertexwise supremum plus one", result, digest


def cmd_adjunction_check(args):
    from .adjoint import verify_adjunction
    from .rep.finite import as_module

    X, digest = _rep(args)
    vertex = _vertex(X, args.vertex)
    M = as_module(X.ring, json.loads(args.module))
    cert = verify_adjunction(X, vertex, M, args.budget)
    return (EXIT_OK if cert else EXIT_ERROR), "e_* is right adjoint to evaluation", {"check": cert.to_json()}, digest


def _vertex(X, text: str):
    for v in X.quiver.vertices:
        if str(v) == text:
            return v
    raise InputError(f"unknown vertex {text!r}")


def cmd_extend(args):
    from .injclass.extend import extend_morphism
    from .rep.serialize import morphism_from_json, morphism_to_json, rep_from_json

    obj, digest = _load(args.input)
    ring = _ring(args)
    try:
        S, X, E = (rep_from_json(obj[k], ring) for k in ("source", "middle", "target"))
        g = morphism_from_json(obj["g"], S, X)
        h = morphism_from_json(obj["h"], S, E)
    except KeyError as exc:
        raise InputError(f"extension problem is missing field {exc.args[0]!r}") from exc
    t = extend_morphism(g, h)
    result = {"t": morphism_to_json(t), "checks": ["t o g == h", "naturality"]}
    return EXIT_OK, "extension into locally injective targets, sinks first", result, digest


def cmd_selftest(args):
    from .acceptance import run_all

    only = set(args.only) if args.only else None
    results = run_all(args.seed, only)
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    return (EXIT_OK if ok else EXIT_ERROR), "acceptance suite", {"criteria": [r.to_json() for r in results]}, None


COMMANDS = {
    "classify": cmd_classify,
    "inject-test": cmd_inject_test,
    "decompose": cmd_decompose,
    "dual": cmd_dual,
    "flat-test": cmd_flat_test,
    "gorenstein": cmd_gorenstein,
    "dims": cmd_dims,
    "adjunction-check": cmd_adjunction_check,
    "extend": cmd_extend,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help="override the ring: zmod:<p>^<k> or gf:<q>")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration budget")
    common.add_argument("--out", help="also write the JSON report here")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="print the full JSON report")

    parser = argparse.ArgumentParser(prog="injquiver", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name != "selftest":
            p.add_argument("input", help="JSON input file")
        if name == "inject-test":
            p.add_argument("--baer", action="store_true", help="also run the exhaustive Baer oracle")
        if name == "gorenstein":
            p.add_argument("--witness", action="store_true", help="build a complete resolution when possible")
        if name == "adjunction-check":
            p.add_argument("--vertex", required=True)
            p.add_argument("--module", required=True, help="seed module as a JSON exponent list, e.g. [2]")
        if name == "selftest":
            p.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    return parser


def _headline(command: str, result: dict) -> str:
    """The one fact a reader wants first from each report."""
    try:
        if command == "classify":
            c = result["classification"]
            return c["verdict"] + (f" ({c['reason']})" if c["reason"] else "")
        if command == "inject-test":
            return result["verdict"]["overall"]
        if command == "flat-test":
            return "flat" if result["verdict"]["flat"] else "not flat"
        if command == "gorenstein":
            return ", ".join(f"{k}: {r.get('holds', 'unsupported')}" for k, r in result.items())
        if command == "dims":
            return f"injdim {result['injdim']['exact']}, Gorenstein injdim {result['ginjdim']['exact']}"
        if command == "decompose":
            return f"{len(result['decomposition']['summands'])} summand types"
    except (KeyError, TypeError):
        pass
    return ""


def _summary(command: str, code: int, result) -> str:
    status = {EXIT_OK: "ok", EXIT_UNKNOWN: "unknown", EXIT_ERROR: "error", EXIT_BUDGET: "budget exceeded"}[code]
    head = _headline(command, to_jsonable(result)) if result is not None else ""
    return f"{command}: {status}" + (f": {head}" if head else "")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {"schema_version": SCHEMA_VERSION, "version": __version__, "command": args.command,
              "seed": args.seed}
    try:
        code, theorem, result, digest = COMMANDS[args.command](args)
        report.update({"input_sha256": digest, "theorem": theorem, "result": result})
    except BudgetExceeded as exc:
        code = EXIT_BUDGET
        report["error"] = {"type": "BudgetExceeded", "message": str(exc)}
    except (InputError, InjQuiverError) as exc:
        code = EXIT_ERROR
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    report["exit_code"] = code
    text = json.dumps(to_jsonable(report), indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    if args.json:
        print(text)
    else:
        print(_summary(args.command, code, report.get("result")))
        if "error" in report:
            print(report["error"]["message"], file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
