"""``trireg`` command-line interface.

Exit codes: 0 success or affirmative verdict, 1 domain failure or negative
verdict, 2 usage error (argparse).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from fractions import Fraction

from trireg import __version__
from trireg.constructions import evaluate, parse_recipe
from trireg.enumeration import EnumSpec, enumerate_regular
from trireg.errors import TriregError
from trireg.feasibility import admissibility_table, classify, render_csv, render_markdown
from trireg.formats import FORMATS, decode_many, encode, encode_graph6
from trireg.graph import Graph, is_connected, regularity_parameters, triangle_degrees
from trireg.search import SearchConfig, config_dict, default_workers, feasible_orders, run_search

log = logging.getLogger("trireg")

SCHEMA_PREFIX = "trireg"
TRACE_POINTS = 200


def schema_id(name: str) -> str:
    """``trireg/<name>/v1``; the schema file is ``docs/schemas/<name>.v1.json``."""
    return f"{SCHEMA_PREFIX}/{name}/v1"


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _params_or_none(G: Graph):
    if G.n == 0:
        return None
    p = regularity_parameters(G)
    return None if p is None else tuple(p)


# -- check ---------------------------------------------------------------------


def _histogram(values) -> dict:
    return {str(k): v for k, v in sorted(Counter(values).items())}


def _check_one(G: Graph) -> dict:
    params = _params_or_none(G)
    return {
        "vertices": G.n,
        "edges": G.edge_count(),
        "degree_histogram": _histogram(G.degrees()),
        "triangle_degree_histogram": _histogram(triangle_degrees(G)),
        "regular_k3_regular": params is not None,
        "parameters": list(params) if params else None,
        "connected": is_connected(G) if G.n else False,
    }


def cmd_check(args) -> int:
    text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
    graphs = decode_many(text, args.format)
    if not graphs:
        raise TriregError("no graph found in input")
    reports = [_check_one(G) for G in graphs]
    ok = all(r["regular_k3_regular"] for r in reports)
    if args.json:
        _emit_json({"schema": schema_id("check"), "graphs": reports, "ok": ok})
    else:
        for i, r in enumerate(reports):
            if i:
                print()
            hist = lambda h: " ".join(f"{k}:{v}" for k, v in h.items()) or "-"
            print(f"vertices: {r['vertices']}")
            print(f"edges: {r['edges']}")
            print(f"degree histogram: {hist(r['degree_histogram'])}")
            print(f"triangle-degree histogram: {hist(r['triangle_degree_histogram'])}")
            if r["parameters"]:
                print("regular K3-regular: yes (r2={}, r3={})".format(*r["parameters"]))
            else:
                print("regular K3-regular: no")
            print(f"connected: {'yes' if r['connected'] else 'no'}")
    return 0 if ok else 1


# -- classify / table ----------------------------------------------------------


def verdict_dict(r2: int, r3: int, verdict) -> dict:
    out = {
        "r2": r2,
        "r3": r3,
        "status": verdict.status,
        "rule": verdict.rule.value if verdict.rule else None,
        "witness": None,
    }
    if verdict.witness is not None:
        out["witness"] = {
            "recipe": verdict.witness.expr(),
            "display": str(verdict.witness),
            "order": verdict.witness.order,
        }
    return out


def cmd_classify(args) -> int:
    if args.r2 < 0 or args.r3 < 0:
        raise ValueError("parameters must be non-negative")
    verdict = classify(args.r2, args.r3)
    if args.json:
        _emit_json({"schema": schema_id("classify"), **verdict_dict(args.r2, args.r3, verdict)})
    elif verdict.is_forbidden:
        print(f"Forbidden ({verdict.rule.value})")
    elif verdict.is_exists:
        print(f"Exists: {verdict.witness}")
    else:
        print("Unknown")
    return 0 if verdict.is_exists else 1


def cmd_table(args) -> int:
    table = admissibility_table(args.max_r2, args.max_r3)
    if args.json:
        cells = []
        for cell in table.ordered():
            d = verdict_dict(cell.r2, cell.r3, cell.verdict)
            d["label"] = cell.label
            d["arrow"] = cell.arrow
            cells.append(d)
        _emit_json({
            "schema": schema_id("table"),
            "max_r2": args.max_r2,
            "max_r3": args.max_r3,
            "cells": cells,
        })
    elif args.format == "csv":
        sys.stdout.write(render_csv(table))
    else:
        sys.stdout.write(render_markdown(table))
    return 0


# -- search --------------------------------------------------------------------


def _subsample(trace, points: int = TRACE_POINTS):
    if len(trace) <= points:
        return trace
    step = (len(trace) - 1) / (points - 1)
    idx = sorted({round(i * step) for i in range(points)})
    return [trace[i] for i in idx]


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def search_report(config: SearchConfig, result, scanned=None) -> dict:
    G = result.best_graph
    return {
        "schema": schema_id("search-report"),
        "config": config_dict(config),
        "scanned_orders": scanned,
        "status": result.status,
        "best_fitness": _frac(result.best_fitness),
        "best_fitness_float": float(result.best_fitness),
        "iterations_used": result.iterations_used,
        "restarts_used": result.restarts_used,
        "best_restart": result.best_restart,
        "fitness_trace": [[it, _frac(f)] for it, f in _subsample(result.fitness_trace)],
        "witness": {
            "graph6": encode_graph6(G),
            "parameters": list(_params_or_none(G) or []) or None,
        },
    }


def cmd_search(args) -> int:
    budgets = dict(
        max_iterations=args.iters,
        restarts=args.restarts,
        plateau_limit=args.plateau,
        seed=args.seed,
    )
    workers = args.workers or default_workers()
    if args.n is not None:
        config = SearchConfig(r2=args.r2, r3=args.r3, n=args.n, **budgets)
        result = run_search(config, workers=workers)
        scanned = None
    else:
        orders = feasible_orders(args.r2, args.n_max)
        if not orders:
            raise ValueError(f"no feasible order n <= {args.n_max} for r2={args.r2}")
        scanned = []
        for n in orders:
            config = SearchConfig(r2=args.r2, r3=args.r3, n=n, **budgets)
            result = run_search(config, workers=workers)
            scanned.append(n)
            log.info("n=%d: %s (best fitness %s)", n, result.status, result.best_fitness)
            if result.found:
                break
    report = search_report(config, result, scanned)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"{result.status} n={config.n} fitness={report['best_fitness']} witness={report['witness']['graph6']}")
    else:
        sys.stdout.write(text)
    return 0 if result.found else 1


# -- enumerate / construct / convert ------------------------------------------


def cmd_enumerate(args) -> int:
    spec = EnumSpec(args.n, args.r2, connected_only=args.connected, filter_r3=args.r3,
                    allow_large=args.allow_large)
    lines = []
    for G in enumerate_regular(spec):
        if args.limit is not None and len(lines) >= args.limit:
            break
        lines.append(encode_graph6(G))
        if not args.json:
            print(lines[-1])
    if args.json:
        _emit_json({
            "schema": schema_id("enumerate"),
            "n": args.n,
            "r2": args.r2,
            "r3": args.r3,
            "connected_only": args.connected,
            "limit": args.limit,
            "count": len(lines),
            "graphs": lines,
        })
    return 0


def cmd_construct(args) -> int:
    recipe = parse_recipe(args.expr)
    G = evaluate(recipe)
    params = _params_or_none(G)
    if args.json:
        _emit_json({
            "schema": schema_id("construct"),
            "recipe": recipe.expr(),
            "display": str(recipe),
            "vertices": G.n,
            "graph6": encode_graph6(G),
            "parameters": list(params) if params else None,
        })
    else:
        print(encode_graph6(G))
        if params:
            print(f"parameters: ({params[0]}, {params[1]})")
        else:
            print("parameters: not regular K3-regular")
    return 0 if params else 1


def cmd_convert(args) -> int:
    graphs = decode_many(sys.stdin.read(), args.from_fmt)
    sys.stdout.write("".join(encode(G, args.to_fmt) for G in graphs))
    return 0


# -- entry point ---------------------------------------------------------------


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trireg", description="Regular K3-regular graph toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="report degree and triangle-degree data of a graph file")
    p.add_argument("file", help="graph6 or edge-list file, '-' for stdin")
    p.add_argument("--format", choices=FORMATS, help="input format (sniffed by default)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="classify a parameter pair")
    p.add_argument("r2", type=_non_negative)
    p.add_argument("r3", type=_non_negative)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("table", help="render the admissibility grid")
    p.add_argument("--max-r2", type=_positive, required=True)
    p.add_argument("--max-r3", type=_positive, required=True)
    p.add_argument("--format", choices=("md", "csv"), default="md")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("search", help="heuristic search for a witness graph")
    p.add_argument("r2", type=_non_negative)
    p.add_argument("r3", type=_non_negative)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--n", type=_positive, help="number of vertices")
    which.add_argument("--n-scan", action="store_true", help="try every feasible n up to --n-max")
    p.add_argument("--n-max", type=_positive, default=32)
    p.add_argument("--seed", type=_non_negative, default=0)
    p.add_argument("--iters", type=_positive, default=SearchConfig.max_iterations)
    p.add_argument("--restarts", type=_positive, default=SearchConfig.restarts)
    p.add_argument("--plateau", type=_positive, default=SearchConfig.plateau_limit)
    p.add_argument("--workers", type=_positive, help="worker processes (default: TRIREG_THREADS or CPU count)")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_search, json=True)

    p = sub.add_parser("enumerate", help="list regular graphs up to isomorphism as graph6")
    p.add_argument("n", type=_positive)
    p.add_argument("r2", type=_non_negative)
    p.add_argument("--connected", action="store_true")
    p.add_argument("--r3", type=_non_negative)
    p.add_argument("--limit", type=_non_negative)
    p.add_argument("--allow-large", action="store_true", help="permit n above the desk-scale cap")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("construct", help="evaluate a recipe such as 'K5 x K3'")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("convert", help="convert between graph6 and edge-list on stdin/stdout")
    p.add_argument("--from", dest="from_fmt", choices=FORMATS, help="input format (sniffed by default)")
    p.add_argument("--to", dest="to_fmt", choices=FORMATS, default="g6")
    p.set_defaults(func=cmd_convert, json=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (TriregError, ValueError, OSError) as exc:
        if getattr(args, "json", False):
            _emit_json({"schema": schema_id("error"), "error": str(exc), "kind": type(exc).__name__})
        else:
            print(f"trireg: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
