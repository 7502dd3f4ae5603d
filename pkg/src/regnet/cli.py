"""Command line interface: ``regnet <command> ...``.

Exit status: 0 on success, 2 for invalid parameters, 3 when ``n * k`` is odd.
Graph files hold one graph6 string per line (``>>graph6<<`` header optional);
``-`` reads standard input.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from fractions import Fraction

from . import graph6
from .bisection import heuristic_bisection, min_bisection
from .bounds import bounds_record
from .enumerate import InvalidDegree, ParityViolation, enumerate_regular
from .graph import GraphError, cartesian_product, degree_profile, format_mpl, metrics
from .pipeline import Interrupted, evaluate, optimize, report, select_optimal
from .symmetry import TooLarge, automorphisms

EXIT_INVALID = 2
EXIT_PARITY = 3


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _read_graphs(path: str):
    if path == "-":
        return list(graph6.read_file(sys.stdin))
    with open(path) as fh:
        return list(graph6.read_file(fh))


def cmd_bounds(args) -> int:
    b = bounds_record(args.n, args.k)
    print(f"n={b.n} k={b.k}")
    print(f"moore_bound(d_min)={b.moore_at_dmin}")
    print(f"d_min={b.d_min}")
    print(f"mpl_min={format_mpl(b.mpl_min)} ({b.mpl_min.numerator}/{b.mpl_min.denominator})")
    return 0


def cmd_enumerate(args) -> int:
    with _open_out(None if args.count_only else args.out) as out:
        def emit(g):
            if not args.count_only:
                out.write(graph6.encode(g) + "\n")

        stats = enumerate_regular(args.n, args.k, emit)
    if stats.parity_violation:
        print(f"no {args.k}-regular graph on {args.n} vertices (n*k odd)", file=sys.stderr)
        return EXIT_PARITY
    if args.count_only:
        print(stats.generated)
    print(f"generated={stats.generated} visited={stats.visited} "
          f"rejected_iso={stats.rejected_iso}", file=sys.stderr)
    return 0


def cmd_metrics(args) -> int:
    for g in _read_graphs(args.file):
        regular, k = degree_profile(g)
        m = metrics(g)
        if not m.connected:
            print(f"n={g.n} k={k if regular else '-'} connected=false")
            continue
        print(f"n={g.n} k={k if regular else '-'} diameter={m.diameter} "
              f"mpl={format_mpl(m.mpl)} ({m.mpl.numerator}/{m.mpl.denominator}) "
              f"distance_sum={m.distance_sum}")
    return 0


def cmd_bisect(args) -> int:
    for g in _read_graphs(args.file):
        if args.heuristic:
            r = heuristic_bisection(g, restarts=args.restarts, seed=args.seed)
        else:
            r = min_bisection(g)
        a, b = r.parts
        print(f"width={r.width} exact={'true' if r.exact else 'false'} "
              f"part1={a} part2={b}")
    return 0


def cmd_aut(args) -> int:
    for g in _read_graphs(args.file):
        s = automorphisms(g)
        print(json.dumps({
            "order": s.order,
            "orbits": [list(o) for o in s.orbits],
            "vertex_transitive": s.vertex_transitive,
            "edge_transitive": s.edge_transitive,
            "generators": [list(p) for p in s.generators],
        }))
    return 0


def cmd_optimize(args) -> int:
    try:
        result = optimize(args.n, args.k, jobs=args.jobs, split_depth=args.split_depth,
                          spill_dir=args.spill, resume=args.resume)
    except Interrupted as exc:
        print(str(exc), file=sys.stderr)
        return 130
    with _open_out(args.out) as out:
        out.write(report(result, args.format, timing=args.timing))
    return 0


def cmd_evaluate(args) -> int:
    graphs = _read_graphs(args.file)
    if not graphs:
        print("no graphs in input", file=sys.stderr)
        return EXIT_INVALID
    evals = evaluate(graphs)
    # '*' marks a value above its theoretical lower bound
    for e in evals:
        n = e.graph.n
        mpl = Fraction(e.score.distance_sum, n * (n - 1))
        print(f"{graph6.encode(e.graph)} diameter={e.score.diameter}"
              f"{'' if e.diameter_meets_bound else '*'} "
              f"mpl={format_mpl(mpl)}{'' if e.mpl_meets_bound else '*'} "
              f"bisection={e.score.bisection} aut_order={e.score.aut_order}")
    if args.format:
        sys.stdout.write(report(select_optimal(evals), args.format))
    return 0


def cmd_product(args) -> int:
    left = _read_graphs(args.file1)
    right = _read_graphs(args.file2)
    with _open_out(args.out) as out:
        for g in left:
            for h in right:
                out.write(graph6.encode(cartesian_product(g, h)) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="regnet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bounds", help="Moore bound, minimal diameter and minimal MPL")
    s.add_argument("n", type=int)
    s.add_argument("k", type=int)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("enumerate", help="all connected k-regular graphs on n vertices")
    s.add_argument("n", type=int)
    s.add_argument("k", type=int)
    s.add_argument("--count-only", action="store_true")
    s.add_argument("--out", help="graph6 output file (default: stdout)")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("metrics", help="diameter and mean path length")
    s.add_argument("file")
    s.set_defaults(func=cmd_metrics)

    s = sub.add_parser("bisect", help="bisection width")
    s.add_argument("file")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="branch and bound (default)")
    mode.add_argument("--heuristic", action="store_true", help="Kernighan-Lin upper bound")
    s.add_argument("--restarts", type=int, default=32)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_bisect)

    s = sub.add_parser("aut", help="automorphism group order, orbits, generators")
    s.add_argument("file")
    s.set_defaults(func=cmd_aut)

    s = sub.add_parser("optimize", help="optimal (n, k) graphs by exhaustive search")
    s.add_argument("n", type=int)
    s.add_argument("k", type=int)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--split-depth", type=int, default=4)
    s.add_argument("--spill", help="directory for survivor spill files and checkpoints")
    s.add_argument("--resume", action="store_true", help="continue from a checkpoint")
    s.add_argument("--format", choices=["json", "csv", "text"], default="text")
    s.add_argument("--timing", action="store_true", help="include wall time in the report")
    s.add_argument("--out")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("evaluate", help="score candidate graphs of one (n, k)")
    s.add_argument("file")
    s.add_argument("--format", choices=["json", "csv", "text"],
                   help="also report the optimal subset in this format")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("product", help="Cartesian products of graphs from two files")
    s.add_argument("file1")
    s.add_argument("file2")
    s.add_argument("--out")
    s.set_defaults(func=cmd_product)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParityViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARITY
    except (InvalidDegree, GraphError, TooLarge, graph6.Graph6Error, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
