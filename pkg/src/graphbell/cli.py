"""Command-line driver: ``graphbell {list,search,verify,show}``.

Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .catalog import CATALOG, catalog_entry, catalog_lookup
from .graph_state import GraphError, generators_from_graph, load_graph_file
from .lhv import cached_group
from .report import (
    ResultDocument,
    format_machine,
    format_text,
    format_verify_row,
    format_verify_summary,
    verify_catalog,
)
from .search import SearchConfig, SearchError, SearchIncomplete, search

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
WORKERS_ENV = "GRAPHBELL_WORKERS"


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def cmd_list(args) -> int:
    for e in CATALOG:
        if args.n is not None and e.n != args.n:
            continue
        edges = " ".join(f"{a}-{b}" for a, b in sorted(e.edges))
        print(f"no{e.number:<3d}{e.name:6s} n={e.n}  edges {edges}")
    return EXIT_OK


def _resolve_graph(args):
    if args.file:
        return load_graph_file(args.file)
    return catalog_lookup(args.graph)


def cmd_search(args) -> int:
    graph = _resolve_graph(args)
    cfg = SearchConfig(args.mode, max_q=args.max_q, workers=args.workers,
                       node_budget=args.node_budget)
    code = EXIT_OK
    try:
        result = search(graph, cfg)
    except SearchIncomplete as exc:
        result, code = exc.result, EXIT_BUDGET
        print("search budget exhausted; reporting best found so far", file=sys.stderr)
    doc = ResultDocument.from_result(result)
    render = format_machine if args.emit == "machine" else format_text
    sys.stdout.write(render(doc, stats=args.stats))
    return code


def cmd_verify(args) -> int:
    names = [args.only] if args.only else None
    if names:
        catalog_entry(args.only)
    rows = verify_catalog(names, workers=args.workers,
                          progress=lambda row: print(format_verify_row(row), flush=True))
    print(format_verify_summary(rows))
    return EXIT_OK if all(r.ok for r in rows) else EXIT_MISMATCH


def cmd_show(args) -> int:
    graph = _resolve_graph(args)
    print(f"graph {graph.name} (n={graph.n})")
    print("generators:")
    for k, g in enumerate(generators_from_graph(graph), 1):
        print(f"  g{k} = {g.pauli}")
    print("stabilizer group:")
    for s in cached_group(graph):
        label = "·".join(f"g{k}" for k in s.generator_indices()) or "1"
        print(f"  {label:24s} {s.pauli}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphbell",
                                     description="Bell inequalities from graph-state stabilizers")
    parser.add_argument("-v", "--verbose", action="store_true", help="log search progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list catalog graph states")
    p.add_argument("--n", type=int, default=None, help="only graphs with this many qubits")
    p.set_defaults(func=cmd_list)

    def graph_source(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--graph", help="catalog name, e.g. ghz3 or no16")
        src.add_argument("--file", help="graph file ('n K' then 'e i j' lines)")

    p = sub.add_parser("search", help="search for an optimal Bell operator")
    graph_source(p)
    p.add_argument("--mode", choices=["exhaustive", "symmetric"], default="symmetric")
    p.add_argument("--max-q", type=int, default=None, help="largest term count considered")
    p.add_argument("--workers", type=int, default=default_workers())
    p.add_argument("--node-budget", type=int, default=None,
                   help="branch-and-bound node limit (exit 3 when hit)")
    p.add_argument("--emit", choices=["text", "machine"], default="text")
    p.add_argument("--stats", action="store_true", help="include timing and candidate counts")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="re-derive the reference tables")
    p.add_argument("--only", default=None, help="verify a single catalog entry")
    p.add_argument("--workers", type=int, default=default_workers())
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("show", help="print generators and the stabilizer group")
    graph_source(p)
    p.set_defaults(func=cmd_show)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (GraphError, SearchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
