"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on input or usage errors.  ``PATH`` may be ``@F0`` .. ``@F3`` for the
embedded fixture documents.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import __version__
from . import linalg as la
from .algebra import LsrAlgebra, check_morphism, check_substructure, validate
from .cohomology import CochainComplex
from .deformation import (FormalAutomorphism, TruncatedDeformation, apply_equivalence, check_deformation,
                          nijenhuis_differential, obstruction, try_extend)
from .fixtures import FIXTURES, fixture_document
from .io import ParseError, document_digest, dump_document, load_document, sparse_entries
from .operators import (check_nijenhuis, check_o_operator, check_rota_baxter, lift_to_semidirect,
                        o_operator_compatibility, search_operators)
from .report import PreconditionError, Report, StructureError, tensor_check
from .representations import validate_representation

DEGREE_WARNING = 4


class Failure(Exception):
    """A mathematical check failed; carries the partial result."""

    def __init__(self, message: str, result: Optional[dict] = None):
        super().__init__(message)
        self.result = result or {}


def _matrix(m) -> list:
    return [[la.format_rational(v) for v in row] for row in m]


def _reports_text(reports) -> str:
    return "\n".join(r.summary() for r in reports)


# subcommands: each returns (result dict, text, exit code)


def cmd_validate(doc, args):
    s = doc.structure
    reports = [validate(s)]
    for name, rep in doc.representations.items():
        r = validate_representation(s, rep)
        r.title = f"representation {name}"
        reports.append(r)
    for name, (kind, sub) in doc.subspaces.items():
        if not isinstance(s, LsrAlgebra):
            raise ParseError(f"subspaces.{name}", "subspace checks need an LSR algebra")
        r = check_substructure(s, sub, kind)
        r.title = f"{kind} {name}"
        reports.append(r)
    for name, fg in doc.morphisms.items():
        r = check_morphism(s, s, fg)
        r.title = f"morphism {name}"
        reports.append(r)
    ok = all(r.ok for r in reports)
    result = {"ok": ok, "reports": [r.to_dict() for r in reports]}
    text = _reports_text(reports)
    if not ok:
        bad = [f"{r.title}: {c.name}" + (f" at {tuple(c.witness)}" if c.witness else "")
               for r in reports for c in r.failures()]
        text += "\nfailed: " + "; ".join(bad)
    return result, text, 0 if ok else 1


def cmd_cohomology(doc, args):
    if doc.is_lie:
        raise ParseError("lie_rinehart", "the cochain complex is defined for LSR algebras")
    if args.degree < 0:
        raise ParseError("--degree", "must be non-negative")
    if args.degree > DEGREE_WARNING:
        print(f"warning: degree {args.degree} > {DEGREE_WARNING}; cochain spaces grow combinatorially",
              file=sys.stderr)
    rep, adj_report = doc.rep(args.rep)
    report = adj_report or validate_representation(doc.structure, rep)
    if not report.ok:
        bad = report.first_failure()
        msg = f"representation fails {bad.name}"
        if adj_report is not None:
            msg += ("; with a nonzero anchor the adjoint pair of an LSR algebra need not be a "
                    "representation, so its complex is not available")
        raise Failure(msg, {"representation": report.to_dict()})
    cx = CochainComplex(doc.structure, rep, check_rep=False)
    rows = []
    for k in range(args.degree + 1):
        dims = cx.dims(k)
        rows.append({"degree": k, "dim_cochains": dims.dim_cochains, "rank_delta": cx.rank(k),
                     "dim_kernel": dims.dim_kernel, "dim_image_prev": dims.dim_image_prev, "h": dims.h})
    c0 = [[la.format_rational(v) for v in b] for b in cx.space(0).basis]
    result = {"representation": args.rep or "adjoint", "table": rows, "C0_basis": c0}
    lines = [f"{'k':>3} {'dim C^k':>8} {'rank d_k':>9} {'H^k':>5}"]
    lines += [f"{r['degree']:>3} {r['dim_cochains']:>8} {r['rank_delta']:>9} {r['h']:>5}" for r in rows]
    lines.append("C^0 basis: " + ("none" if not c0 else ", ".join("(" + ", ".join(v) + ")" for v in c0)))
    return result, "\n".join(lines), 0


def _deformation(doc, args) -> tuple[str, TruncatedDeformation]:
    if not isinstance(doc.structure, LsrAlgebra):
        raise ParseError("lie_rinehart", "deformations are defined for LSR algebras")
    name, terms = doc.pick("deformations", args.name)
    return name, TruncatedDeformation(doc.structure, terms)


def _fragment(name, d: TruncatedDeformation) -> dict:
    return {"deformations": {name: {"terms": [sparse_entries(m) for m in d.terms]}}}


def cmd_deform(doc, args):
    name, d = _deformation(doc, args)
    action = args.action
    if action == "check":
        report = check_deformation(d)
        return {"deformation": name, "report": report.to_dict()}, report.summary(), 0 if report.ok else 1
    if action == "obstruction":
        cochain, report = obstruction(d)
        result = {"deformation": name, "order": d.order + 1, "zero": cochain.is_zero(),
                  "obstruction": sparse_entries(cochain.full), "report": report.to_dict()}
        text = report.summary() + "\nObs entries: " + json.dumps(result["obstruction"])
        return result, text, 0
    if action == "extend":
        m_next = try_extend(d)
        if m_next is None:
            raise Failure(f"obstruction class of {name} at order {d.order + 1} is nonzero",
                          {"deformation": name, "extendable": False})
        fragment = _fragment(name, d.extended(m_next))
        result = {"deformation": name, "extendable": True, "fragment": fragment}
        return result, dump_document(fragment).rstrip(), 0
    # equiv
    phi_name, maps = doc.pick("automorphisms", args.automorphism)
    phi = FormalAutomorphism(maps)
    out = apply_equivalence(d, phi)
    report = Report(f"equivalence {phi_name} applied to {name}")
    report.extend(check_deformation(out), prefix="transformed: ")
    diff = d.terms[0] - out.terms[0] - nijenhuis_differential(doc.structure, phi.series(d.base.dim, 1)[1])
    report.add(tensor_check("m_1 - m~_1 = delta(phi_1)", diff))
    back = apply_equivalence(out, phi.inverse())
    report.add(tensor_check("round trip through the inverse",
                            la.qarray([t - u for t, u in zip(back.terms, d.terms)]).reshape(-1, d.base.dim)))
    fragment = _fragment(name, out)
    result = {"deformation": name, "automorphism": phi_name, "fragment": fragment, "report": report.to_dict()}
    return result, report.summary() + "\n" + dump_document(fragment).rstrip(), 0 if report.ok else 1


def cmd_operators(doc, args):
    s, action = doc.structure, args.action
    weight = la.parse_rational(args.weight)
    if action == "search":
        rep = None
        if args.identity == "o-operator":
            rep, _ = doc.rep(args.rep)
        try:
            found = search_operators(s, args.identity, args.entries_bound, weight, rep)
        except ValueError as exc:
            raise ParseError("--entries-bound", str(exc)) from exc
        mats = [_matrix(m) for m in found]
        result = {"identity": args.identity, "entries_bound": args.entries_bound,
                  "weight": la.format_rational(weight), "count": len(mats), "operators": mats}
        text = f"{len(mats)} operators satisfy {args.identity}:\n" + "\n".join(json.dumps(m) for m in mats)
        return result, text, 0
    if action in ("nijenhuis", "rota-baxter"):
        name, n = doc.pick("operators", args.operator)
        report = check_nijenhuis(s, n) if action == "nijenhuis" else check_rota_baxter(s, n, weight)
        result = {"operator": name, "verdict": report.ok, "report": report.to_dict()}
        return result, report.summary(), 0 if report.ok else 1

    def module_map(name):
        name, (rep_name, t) = doc.pick("module_maps", name)
        rep, _ = doc.rep(rep_name)
        return name, rep_name, rep, t

    if action == "o-operator":
        name, _, rep, t = module_map(args.map)
        report = check_o_operator(s, rep, t)
        return {"map": name, "verdict": report.ok, "report": report.to_dict()}, report.summary(), 0 if report.ok else 1
    if action == "lift":
        name, _, rep, t = module_map(args.map)
        report = lift_to_semidirect(s, rep, t, weight)
        return {"map": name, "verdict": report.ok, "report": report.to_dict()}, report.summary(), 0 if report.ok else 1
    # compat
    names = list(doc.module_maps)
    first = args.map or (names[0] if len(names) == 2 else None)
    second = args.map2 or (names[1] if len(names) == 2 else None)
    if first is None or second is None:
        raise ParseError("module_maps", "compat needs --map and --map2 unless exactly two maps are declared")
    n1, r1, rep, t1 = module_map(first)
    n2, r2, _, t2 = module_map(second)
    if r1 != r2:
        raise ParseError("module_maps", f"{n1} and {n2} use different representations")
    report = o_operator_compatibility(s, rep, t1, t2)
    return {"maps": [n1, n2], "verdict": report.ok, "report": report.to_dict()}, report.summary(), 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a key-sorted JSON report")

    p = argparse.ArgumentParser(prog="lsrkit", description="Exact computations for left-symmetric Rinehart algebras.")
    p.add_argument("--version", action="version", version=f"lsrkit {__version__}")
    p.add_argument("--fixtures", metavar="DIR", help="write the fixture documents F0-F3 into DIR and exit")
    sub = p.add_subparsers(dest="command")

    v = sub.add_parser("validate", parents=[common], help="validate every declared structure")
    v.add_argument("path")

    c = sub.add_parser("cohomology", parents=[common], help="cochain dimensions, ranks and cohomology")
    c.add_argument("path")
    c.add_argument("--rep", default=None, help="representation name (default: adjoint)")
    c.add_argument("--degree", type=int, default=2)

    d = sub.add_parser("deform", parents=[common], help="deformation equations, obstructions, extensions")
    d.add_argument("action", choices=["check", "extend", "obstruction", "equiv"])
    d.add_argument("path")
    d.add_argument("--name", help="deformation name")
    d.add_argument("--automorphism", help="automorphism name for equiv")

    o = sub.add_parser("operators", parents=[common], help="Nijenhuis, Rota-Baxter and O-operators")
    o.add_argument("action", choices=["nijenhuis", "rota-baxter", "o-operator", "compat", "lift", "search"])
    o.add_argument("path")
    o.add_argument("--operator", help="operator name")
    o.add_argument("--map", help="module map name")
    o.add_argument("--map2", help="second module map for compat")
    o.add_argument("--rep", help="representation for o-operator search (default: adjoint)")
    o.add_argument("--weight", default="0")
    o.add_argument("--identity", default="nijenhuis", choices=["nijenhuis", "rota-baxter", "o-operator"])
    o.add_argument("--entries-bound", type=int, default=1)
    return p


COMMANDS = {"validate": cmd_validate, "cohomology": cmd_cohomology, "deform": cmd_deform,
            "operators": cmd_operators}


def _write_fixtures(directory: str) -> int:
    os.makedirs(directory, exist_ok=True)
    for name in FIXTURES:
        with open(os.path.join(directory, f"{name}.json"), "w") as fh:
            fh.write(dump_document(fixture_document(name)))
    print(f"wrote {', '.join(FIXTURES)} to {directory}")
    return 0


def _emit(args, data: bytes, result: dict, text: str, code: int, error: Optional[str] = None):
    if args.json:
        out = {"tool": "lsrkit", "version": __version__, "command": args.command,
               "input_digest": document_digest(data) if data is not None else None,
               "exit_code": code, "result": result}
        if args.command in ("deform", "operators"):
            out["action"] = args.action
        if error:
            out["error"] = error
        sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    else:
        if text:
            print(text)
        if error:
            print(f"error: {error}", file=sys.stderr)


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.fixtures:
        return _write_fixtures(args.fixtures)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    data = None
    try:
        doc, data = load_document(args.path)
        result, text, code = COMMANDS[args.command](doc, args)
    except (ParseError, StructureError, ZeroDivisionError) as exc:
        _emit(args, data, {}, "", 2, str(exc))
        return 2
    except ValueError as exc:
        if isinstance(exc, PreconditionError):
            res = {"report": exc.report.to_dict()} if exc.report is not None else {}
            _emit(args, data, res, exc.report.summary() if exc.report is not None else "", 1, str(exc))
            return 1
        _emit(args, data, {}, "", 2, str(exc))
        return 2
    except Failure as exc:
        _emit(args, data, exc.result, "", 1, str(exc))
        return 1
    _emit(args, data, result, text, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
