"""Command-line entry point: ``bruhat-atlas <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from .exactmat import SingularMatrixError
from .ginv import g_invariant_catalog
from .permcomb import Permutation
from .stratmap import (
    FlagPoint, ResourceGuardError, ambient_dimension, divisor_predicate, ideal_violation,
    stratification_poset, stratum_dimension, stratum_report, v_of_point,
)
from .verify import SCHEMA, SUITES, run_suite, run_suites

EXIT_FAIL = 1


class CliError(Exception):
    pass


def _dump(obj, indent: int | None = 2) -> str:
    return json.dumps(obj, sort_keys=True, indent=indent, ensure_ascii=False)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


# --- ideal ----------------------------------------------------------------


def cmd_ideal(args) -> int:
    try:
        poset = stratification_poset(args.n, allow_large=args.allow_large)
    except ResourceGuardError as exc:
        raise CliError(str(exc)) from None
    n = args.n
    dims = {w: stratum_dimension(w, n) for w in poset.elements}
    hist = Counter(dims.values())
    histogram = [hist.get(d, 0) for d in range(ambient_dimension(n) + 1)]
    if args.format == "json":
        doc = {
            "schema": SCHEMA,
            "n": n,
            "size": len(poset),
            "histogram": histogram,
            "nodes": [{"w": w.to_json(), "dimension": dims[w], "report": stratum_report(w, n).to_json()}
                      for w in poset.elements],
            "covers": poset.to_json()["covers"],
        }
        print(_dump(doc, indent=None))
    elif args.format == "dot":
        print(ideal_dot(poset, dims))
    else:
        print(f"order ideal for n = {n}: {len(poset)} strata")
        print("histogram by dimension: " + ", ".join(f"{d}:{c}" for d, c in enumerate(histogram)))
        for d in range(len(histogram) - 1, -1, -1):
            row = [str(w) for w in poset.elements if dims[w] == d]
            if row:
                print(f"dim {d}: {' '.join(row)}")
    return 0


def ideal_dot(poset, dims: dict) -> str:
    lines = ["digraph ideal {", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
    for d in sorted(set(dims.values())):
        members = " ".join(f'"{w}";' for w in poset.elements if dims[w] == d)
        lines.append(f"  subgraph dim{d} {{ rank=same; {members} }}")
    for a, b in poset.covers:
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines)


# --- stratum --------------------------------------------------------------


def cmd_stratum(args) -> int:
    try:
        w = Permutation.parse(args.perm)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if w.m != 2 * args.n:
        raise CliError(f"{w} is not in S_{2 * args.n}")
    problem = ideal_violation(w, args.n)
    if problem is not None:
        raise CliError(f"not in ideal: {problem}")
    report = stratum_report(w, args.n)
    print(_dump({"schema": SCHEMA, **report.to_json()}) if args.format == "json" else report.to_text())
    return 0


# --- eval -----------------------------------------------------------------


def load_point(path: str) -> FlagPoint:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return FlagPoint.from_json(data)
    except SingularMatrixError as exc:
        raise CliError(f"singular flag matrix g: {exc}") from None
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CliError(f"malformed point file {path}: {exc}") from None


def cmd_eval(args) -> int:
    p = load_point(args.point)
    v = v_of_point(p)
    divisors = [f"s{k}" for k in range(1, 2 * p.n) if divisor_predicate(p, k)]
    if args.format == "json":
        print(_dump({"schema": SCHEMA, "n": p.n, "v": v.to_json(), "stratum": str(v),
                     "dimension": stratum_dimension(v, p.n), "divisors": divisors}))
    else:
        print(f"v(p)      {v}")
        print(f"stratum   {v}  (dimension {stratum_dimension(v, p.n)})")
        print(f"divisors  {', '.join(divisors) or '-'}")
    return 0


# --- verify / charts ------------------------------------------------------


def cmd_verify(args) -> int:
    names = args.suite or list(SUITES)
    for name in names:
        if name not in SUITES:
            raise CliError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    ns = (args.n,) if args.n is not None else None
    if ns is not None and "fixture-n2" in names and args.n != 2:
        raise CliError("the fixture-n2 suite only exists for n = 2")
    summary = run_suites(names, ns, args.seed, args.trials)
    print(_dump(summary))
    return 0 if summary["passed"] else EXIT_FAIL


def cmd_charts(args) -> int:
    if not args.check:
        raise CliError("nothing to do: pass --check")
    res = run_suite("charts", args.n, args.seed, args.trials)
    if args.format == "json":
        print(_dump({"schema": SCHEMA, **res.to_json()}))
    else:
        print(f"charts n = {args.n}, seed = {args.seed}, trials = {args.trials}")
        for pi, status in res.details["by_pi"].items():
            print(f"  pi = {pi}  {status}")
        for f in res.failures:
            print(f"  FAIL {f['module']}.{f['op']} seed={f['seed']} trial={f['trial']}: {f['message']}")
    return 0 if res.passed else EXIT_FAIL


# --- ginv -----------------------------------------------------------------


def cmd_ginv(args) -> int:
    rows = g_invariant_catalog(args.n)
    if args.format == "json":
        print(_dump({
            "schema": SCHEMA,
            "n": args.n,
            "strata": [{"sigma": r["sigma"].to_json(), "rho": r["rho"].to_json(), "dimension": r["dimension"],
                        "conditions": r["conditions"]} for r in rows],
        }))
    else:
        width = max(len(str(r["rho"])) for r in rows)
        print(f"{'sigma':<{2 * args.n}}  {'rho':<{width}}  dim  conditions")
        for r in rows:
            cond = "; ".join(r["conditions"]) or "(open)"
            print(f"{str(r['sigma']):<{2 * args.n}}  {str(r['rho']):<{width}}  {r['dimension']:>3}  {cond}")
    return 0


# --- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bruhat-atlas", description="Strata of Fl(n) x Mat_n and their charts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ideal", help="enumerate the stratification poset")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--format", choices=["json", "dot", "text"], default="json")
    p.add_argument("--allow-large", action="store_true", help="lift the n <= 4 guard")
    p.set_defaults(func=cmd_ideal)

    p = sub.add_parser("stratum", help="describe one stratum")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--perm", required=True, help="one-line notation, e.g. 1432")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_stratum)

    p = sub.add_parser("eval", help="evaluate v at a point read from a JSON file")
    p.add_argument("--point", required=True)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run seeded verification suites")
    p.add_argument("--suite", action="append", help=f"repeatable; one of {', '.join(SUITES)} (default: all)")
    p.add_argument("--n", type=_positive, default=None, help="default: each suite's own range")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=_positive, default=20)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("charts", help="check the chart maps for every pi in S_n")
    p.add_argument("--check", action="store_true")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=_positive, default=20)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_charts)

    p = sub.add_parser("ginv", help="catalog of GL_n-invariant strata")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_ginv)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
