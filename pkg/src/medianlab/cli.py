"""Command-line front end. Reports go to stdout as JSON, diagnostics to stderr.

Exit codes: 0 success, 1 domain error or failed check, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import catalog
from .checks import CHECKS, SINGLE, check_gluing_pair
from .congruence import theta_d
from .errors import MedianlabError
from .io import (
    classification_json,
    inner_json,
    lattice_to_json,
    load_lattice,
    median_lattice_json,
    to_dot,
    tposet_json,
)
from .iso import automorphisms
from .lattice import is_distributive, is_modular
from .medians import (
    DEFAULT_CLONE_CAP,
    DEFAULT_MEDIAN_CAP,
    default_cap,
    enumerate_outer_medians,
    inner_median_lattice,
    outer_median_lattice,
    t_poset,
    ternary_clone,
)
from .terms import holds_identity, holds_inequality, evaluate, parse_term, render_term


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=False) + "\n")


def cmd_lattice(args) -> int:
    L = load_lattice(args.file)
    _emit(
        {
            "size": L.n,
            "distributive": is_distributive(L),
            "modular": is_modular(L),
            "automorphism_count": len(automorphisms(L)),
            "theta_d_blocks": theta_d(L).num_blocks,
        }
    )
    return 0


def cmd_medians(args) -> int:
    L = load_lattice(args.file)
    cap = args.cap if args.cap is not None else None
    show_all = not (args.tposet or args.outer or args.inner)
    report: dict = {}
    tp = t_poset(L)
    if args.tposet or show_all:
        report["t_poset"] = tposet_json(tp)
    medians = enumerate_outer_medians(L, cap if cap is not None else default_cap(DEFAULT_MEDIAN_CAP), tp)
    dot_dir = Path(args.dot) if args.dot else None
    if dot_dir:
        dot_dir.mkdir(parents=True, exist_ok=True)
    if args.outer or show_all:
        om = outer_median_lattice(L, medians)
        report["om"] = median_lattice_json(om)
        if dot_dir:
            (dot_dir / "om.dot").write_text(to_dot(om.lattice, "OM"), encoding="utf-8")
    if args.inner or show_all:
        clone = ternary_clone(L, cap if cap is not None else default_cap(DEFAULT_CLONE_CAP))
        im = inner_median_lattice(L, medians, clone)
        report["im"] = inner_json(im)
        report["classification"] = classification_json(im)
        if dot_dir:
            (dot_dir / "im.dot").write_text(to_dot(im.lattice, "IM"), encoding="utf-8")
    if dot_dir:
        (dot_dir / "lattice.dot").write_text(to_dot(L, "L"), encoding="utf-8")
    _emit(report)
    return 0


def cmd_term(args) -> int:
    t = parse_term(args.term)
    out: dict = {"canonical": render_term(t), "arity": t.arity}
    if args.lattice:
        L = load_lattice(args.lattice)
        if args.eval:
            assignment = [L.index(x) for x in args.eval.split(",")]
            out["value"] = L.names[evaluate(t, L, assignment)]
        for flag, fn in (("equals", holds_identity), ("leq", holds_inequality)):
            other = getattr(args, flag)
            if other:
                verdict = fn(L, t, parse_term(other))
                out[flag] = {
                    "other": render_term(parse_term(other)),
                    "holds": verdict.holds,
                    "witness": None if verdict.witness is None else [L.names[i] for i in verdict.witness],
                }
    _emit(out)
    return 0


def cmd_check(args) -> int:
    *targets, check = args.args
    if check not in CHECKS:
        print(f"unknown check {check!r}; choose from {', '.join(CHECKS)}", file=sys.stderr)
        return 2
    results = []
    if targets:
        if len(targets) != 1 or args.size is not None:
            print("give either one lattice file or --size", file=sys.stderr)
            return 2
        L = load_lattice(targets[0])
        results.append({"lattice": targets[0], **SINGLE[check](L)})
    elif args.size is not None:
        if check == "gluing-prop":
            pool = catalog.lattices_up_to(args.size - 1)
            for i, L1 in enumerate(pool):
                for j, L2 in enumerate(pool):
                    results.append({"pair": [i, j], "sizes": [L1.n, L2.n], **check_gluing_pair(L1, L2)})
        else:
            for i, L in enumerate(catalog.enumerate_lattices(args.size)):
                results.append({"index": i, "covers": lattice_to_json(L)["covers"], **SINGLE[check](L)})
    else:
        print("give a lattice file or --size", file=sys.stderr)
        return 2
    passed = all(r["pass"] for r in results)
    _emit({"check": check, "pass": passed, "count": len(results), "results": results})
    return 0 if passed else 1


def cmd_catalog(args) -> int:
    if args.size is not None:
        _emit([lattice_to_json(L) for L in catalog.enumerate_lattices(args.size)])
    elif args.named:
        _emit(lattice_to_json(catalog.build_named(args.named)))
    elif args.E is not None:
        _emit(lattice_to_json(catalog.build_E(args.E)))
    else:
        _emit(list(catalog.NAMED))
    return 0


def _parse_overrides(items: list[str]) -> dict[str, dict]:
    out: dict[str, dict] = {}
    for item in items:
        name, _, rest = item.partition("=")
        om_size, _, im_size = rest.partition(",")
        out[name] = {"om_size": int(om_size), "im_size": int(im_size or 0)}
    return out


def cmd_table1(args) -> int:
    expectations = list(catalog.TABLE1)
    for name, fields in _parse_overrides(args.expect).items():
        expectations = [
            replace(e, om_size=fields["om_size"], im_size=fields["im_size"] or e.im_size) if e.name == name else e
            for e in expectations
        ]
    rows = catalog.reproduce_table1(expectations, materialize=args.materialize)
    failing = [r.name for r in rows if not r.match]
    if args.markdown:
        print(catalog.table1_markdown(rows), file=sys.stderr)
    _emit({"rows": [r.to_json() for r in rows], "matched": len(rows) - len(failing), "failing": failing})
    if failing:
        print(f"reference table mismatch in rows: {', '.join(failing)}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="medianlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="structural summary of a lattice file")
    p.add_argument("file")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("medians", help="T-poset, outer and inner median lattices")
    p.add_argument("file")
    p.add_argument("--tposet", action="store_true")
    p.add_argument("--outer", action="store_true")
    p.add_argument("--inner", action="store_true")
    p.add_argument("--dot", metavar="DIR", help="write Hasse diagrams as DOT files into DIR")
    p.add_argument("--cap", type=int, help="bound on the number of medians and clone members")
    p.set_defaults(func=cmd_medians)

    p = sub.add_parser("term", help="parse a term and optionally check it on a lattice")
    p.add_argument("term")
    p.add_argument("--lattice", metavar="FILE")
    p.add_argument("--eval", metavar="A,B,C", help="element names to substitute for x1,x2,x3")
    p.add_argument("--equals", metavar="TERM")
    p.add_argument("--leq", metavar="TERM")
    p.set_defaults(func=cmd_term)

    p = sub.add_parser("check", help=f"run a verification: {', '.join(CHECKS)}")
    p.add_argument("args", nargs="+", metavar="[FILE] CHECK")
    p.add_argument("--size", type=int)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("catalog", help="enumerate or build named lattices")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--size", type=int)
    group.add_argument("--named")
    group.add_argument("--E", type=int)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("table1", help="reproduce the table of 5- and 6-element lattices")
    p.add_argument("--materialize", action="store_true", help="build large OMs instead of certifying by product")
    p.add_argument("--markdown", action="store_true", help="also print a Markdown table to stderr")
    p.add_argument("--expect", action="append", default=[], metavar="NAME=OM,IM", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_table1)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MedianlabError as exc:
        _emit(exc.to_json())
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
