"""Command-line interface.

Subcommands:
  check      analyze one graph at one or all base vertices (NDJSON or table)
  construct  build an apex extension over a product and print the graph
  scan       cross-validate a graph6 corpus or an exhaustive enumeration
  oracle     compare product-based and enumeration-based walk counts
  partition  dump the distance partition cells of one edge

Exit codes: 0 success, 2 bad input, 3 cross-validation mismatch,
4 oracle disagreement.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from .constructions import (apex_extension, complete_graph, cycle_graph,
                            empty_graph, example_graph, path_graph,
                            petersen_graph, rook_graph_3x3, star_graph)
from .exact import (SHAPE_FAMILIES, build_operators, enumerate_walks,
                    shape_string, walk_table)
from .graphs import Graph, GraphError, distance_partition, parse_edge_list, \
    parse_graph6, to_graph6
from .report import MISMATCH, analyze, report_to_dict, report_to_json
from .scan import generate_connected_graph6, scan_corpus

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Graph sources
# ---------------------------------------------------------------------------

def _builtin(name: str) -> Optional[tuple[Graph, Optional[int]]]:
    if name == "example":
        g, base = example_graph()
        return g, base
    if name == "petersen":
        return petersen_graph(), None
    if name == "rook3x3":
        return rook_graph_3x3(), None
    if ":" in name:
        kind, _, arg = name.partition(":")
        try:
            n = int(arg)
        except ValueError:
            return None
        makers = {"cycle": cycle_graph, "path": path_graph,
                  "complete": complete_graph, "star": star_graph,
                  "empty": empty_graph}
        if kind in makers:
            return makers[kind](n), None
    return None


def load_graph(source: str, input_format: str = "auto") -> tuple[Graph, Optional[int]]:
    """Resolve a builtin name, '-', or a file path into a Graph plus an
    optional distinguished base vertex."""
    built = _builtin(source)
    if built is not None:
        return built
    if source == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(source, "r", encoding="ascii") as fh:
                text = fh.read()
        except OSError as exc:
            raise GraphError(f"cannot read {source}: {exc}") from exc
    return _parse_text(text, input_format), None


def _parse_text(text: str, input_format: str) -> Graph:
    if input_format == "edgelist":
        return parse_edge_list(text)
    if input_format == "graph6":
        return _parse_graph6_text(text)
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if lines and all(len(ln.split()) == 2 for ln in lines):
        return parse_edge_list(text)
    return _parse_graph6_text(text)


def _parse_graph6_text(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise GraphError("expected a single graph6 record")
    return parse_graph6(lines[0])


def _resolve_base(g: Graph, args, default: Optional[int]) -> list[int]:
    if getattr(args, "all_vertices", False):
        return list(range(g.n))
    label = getattr(args, "vertex", None)
    if label is not None:
        return [g.index_of(label)]
    if default is not None:
        return [default]
    raise GraphError("no base vertex: pass --vertex LABEL or --all-vertices")


# ---------------------------------------------------------------------------
# Table rendering
# ---------------------------------------------------------------------------

def _render_table(title: str, header: Sequence[str],
                  rows: Sequence[tuple[str, Sequence[str]]]) -> str:
    width = max([len(name) for name, _ in rows] + [1])
    cell = max([len(str(v)) for _, vals in rows for v in vals]
               + [len(str(h)) for h in header] + [1])
    out = [title]
    out.append("  ".join(["i".ljust(width)] + [str(h).rjust(cell) for h in header]))
    for name, vals in rows:
        out.append("  ".join([name.ljust(width)] + [str(v).rjust(cell) for v in vals]))
    return "\n".join(out)


def _print_check_table(rep_dict) -> None:
    pdr = rep_dict["pdr"]
    levels = list(range(len(pdr["alpha"])))
    print(_render_table(
        f"ratio fit (ok={pdr['ok']})", [str(i) for i in levels],
        [("alpha", pdr["alpha"]), ("beta", pdr["beta"])]))
    e1 = rep_dict["endpoint1"]
    if not e1["applicable"]:
        print(f"endpoint-1 fit: not applicable ({e1['reason']})")
    else:
        lv = e1["levels"]
        print(_render_table(
            f"endpoint-1 fit (ok={e1['ok']})",
            [str(entry["level"]) for entry in lv],
            [(name, [entry[name] if entry[name] is not None else "free"
                     for entry in lv])
             for name in ("kappa", "mu", "theta", "rho")]))
    dec = rep_dict["decomposition"]
    if dec is not None:
        print(f"decomposition: {len(dec['modules'])} modules, "
              f"verdict {dec['verdict']['status']}"
              + (f" ({dec['verdict']['reason']})" if dec['verdict']['reason'] else ""))
        for m in dec["modules"]:
            print(f"  endpoint {m['endpoint']} dim {m['dim']} "
                  f"levels {m['level_dims']} thin={m['thin']} class {m['iso_class']}")
    print(f"agreement: {rep_dict['agreement']}"
          + (f" ({rep_dict['agreement_reason']})" if rep_dict["agreement_reason"] else ""))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    g, default_base = load_graph(args.source, args.input)
    if not g.is_connected():
        raise GraphError("analysis needs a connected graph")
    bases = _resolve_base(g, args, default_base)
    worst = 0
    for x in bases:
        rep = analyze(g, x, with_decomposition=args.decompose,
                      seed=args.seed, tol=args.tol)
        if args.format == "table":
            print(f"== base vertex {g.labels[x]} ==")
            _print_check_table(report_to_dict(rep))
        else:
            print(report_to_json(rep, include_bases=args.include_bases))
        if rep.agreement == MISMATCH:
            worst = 3
    return worst


def cmd_construct(args) -> int:
    g, default_base = load_graph(args.gamma, "auto")
    x = g.index_of(args.x) if args.x is not None else default_base
    if x is None:
        raise GraphError("no base vertex given for the first factor")
    makers = {"empty": empty_graph, "complete": complete_graph,
              "cycle": cycle_graph, "path": path_graph}
    if args.sigma_kind not in makers:
        raise GraphError(f"unknown sigma kind {args.sigma_kind!r}")
    sigma = makers[args.sigma_kind](args.sigma_n)
    result = apex_extension(g, x, sigma)
    h = result.graph
    if args.output == "graph6":
        print(to_graph6(h))
    else:
        print(f"# apex extension: {args.gamma} (base {g.labels[x]}) with "
              f"{args.sigma_kind}:{args.sigma_n}; apex vertex: w")
        for u, v in h.edges():
            print(f"{h.labels[u]} {h.labels[v]}")
    return 0


def cmd_scan(args) -> int:
    if args.generate is not None:
        if args.corpus is not None:
            raise GraphError("give either a corpus or --generate, not both")
        if args.generate > 7:
            raise GraphError("--generate supports n <= 7")
        lines = generate_connected_graph6(args.generate)
    elif args.corpus is not None:
        if args.corpus == "-":
            raw = sys.stdin.read()
        else:
            with open(args.corpus, "r", encoding="ascii") as fh:
                raw = fh.read()
        lines = iter([ln.strip() for ln in raw.splitlines() if ln.strip()])
    else:
        raise GraphError("scan needs a corpus path or --generate N")

    progress = None
    if args.progress:
        progress = lambda n: print(f"# scanned {n} graphs", file=sys.stderr)
    summary = scan_corpus(lines, jobs=args.jobs, seed=args.seed, tol=args.tol,
                          deep=not args.no_deep, progress=progress)
    if args.format == "table":
        print(f"graphs {summary.graphs}  instances {summary.instances}")
        for key, value in summary.counts.items():
            print(f"  {key}: {value}")
        print(f"  mismatches: {len(summary.mismatches)}")
        print(f"  dim bound violations: {len(summary.dim_bound_violations)}")
        print(f"  structure violations: {len(summary.structure_violations)}")
    else:
        print(json.dumps(summary.to_dict(), sort_keys=True, separators=(",", ":")))
    for mism in summary.mismatches:
        print(json.dumps(mism, sort_keys=True, separators=(",", ":")))
    for item in summary.dim_bound_violations + summary.structure_violations:
        print(json.dumps(item, sort_keys=True, separators=(",", ":")))
    return 0 if summary.clean else 3


def _parse_shape(shape: str) -> tuple[str, int]:
    if shape == "":
        return "r", 0
    body = shape
    if all(c == "r" for c in body):
        return "r", len(body)
    if body.endswith("l") and all(c == "r" for c in body[:-1]):
        return "rl", len(body) - 1
    if body.startswith("l") and all(c == "r" for c in body[1:]):
        return "lr", len(body) - 1
    if body.endswith("f") and all(c == "r" for c in body[:-1]):
        return "rf", len(body) - 1
    raise GraphError(
        f"shape {shape!r} is not in the table families "
        f"{SHAPE_FAMILIES} (letters r, then optional trailing l/f, "
        f"or leading l)")


def cmd_oracle(args) -> int:
    g, _ = load_graph(args.source, "auto")
    if not g.is_connected():
        raise GraphError("oracle needs a connected graph")
    x = g.index_of(args.x)
    y = g.index_of(args.y)
    z = g.index_of(args.z)
    family, m = _parse_shape(args.shape)
    table = walk_table(build_operators(g, x), family, m)
    from_table = table.counts[z, y]
    from_enum = enumerate_walks(g, x, shape_string(family, m), y, z)
    agree = from_table == from_enum
    print(json.dumps({
        "shape": args.shape, "family": family, "m": m,
        "walk_table": str(from_table), "enumeration": str(from_enum),
        "agree": agree,
    }, sort_keys=True, separators=(",", ":")))
    return 0 if agree else 4


def cmd_partition(args) -> int:
    g, _ = load_graph(args.source, "auto")
    if not g.is_connected():
        raise GraphError("partition needs a connected graph")
    x = g.index_of(args.x)
    y = g.index_of(args.y)
    part = distance_partition(g, x, y)
    cells = {f"{i},{j}": [g.labels[v] for v in vs]
             for (i, j), vs in sorted(part.cells.items())}
    print(json.dumps({
        "x": g.labels[x], "y": g.labels[y],
        "ecc_x": part.ecc_x, "ecc_y": part.ecc_y, "cells": cells,
    }, sort_keys=True, separators=(",", ":")))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=42,
                   help="random seed for the decomposition (default 42)")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="numeric tolerance for rank decisions (default 1e-9)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tkit",
        description="Local analysis of a graph's Terwilliger algebra: exact "
                    "walk-count fits, irreducible module decomposition, and "
                    "cross-validation of the two.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="analyze one graph at base vertices")
    p.add_argument("source", help="file path, '-', or builtin "
                                  "(example, petersen, rook3x3, cycle:N, "
                                  "path:N, complete:N, star:N)")
    p.add_argument("--vertex", help="base vertex label")
    p.add_argument("--all-vertices", action="store_true")
    p.add_argument("--decompose", action="store_true",
                   help="also run the numeric module decomposition")
    p.add_argument("--include-bases", action="store_true",
                   help="embed module basis vectors in the JSON")
    p.add_argument("--input", choices=("auto", "edgelist", "graph6"),
                   default="auto")
    p.add_argument("--format", choices=("ndjson", "table"), default="ndjson")
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("construct", help="apex extension over a product")
    p.add_argument("gamma", help="first factor graph source")
    p.add_argument("x", help="base vertex label in the first factor")
    p.add_argument("sigma_kind", choices=("empty", "complete", "cycle", "path"))
    p.add_argument("sigma_n", type=int)
    p.add_argument("--output", choices=("edgelist", "graph6"), default="edgelist")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("scan", help="cross-validate a corpus")
    p.add_argument("corpus", nargs="?", help="graph6 file or '-'")
    p.add_argument("--generate", type=int, metavar="N",
                   help="enumerate all connected graphs on N labeled vertices")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: TK_JOBS or all cores)")
    p.add_argument("--no-deep", action="store_true",
                   help="skip block-dimension and cell-structure checks")
    p.add_argument("--progress", action="store_true")
    p.add_argument("--format", choices=("ndjson", "table"), default="ndjson")
    _add_common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("oracle", help="walk-count cross-check for one entry")
    p.add_argument("source")
    p.add_argument("x")
    p.add_argument("shape", help="shape string over r/f/l, e.g. rl, rrl, lrr")
    p.add_argument("y")
    p.add_argument("z")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("partition", help="dump distance partition cells")
    p.add_argument("source")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=cmd_partition)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
