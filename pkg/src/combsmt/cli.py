"""Command-line front end.

Exit codes: 10 sat, 20 unsat, 1 error, 0 success for the other commands.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .arrangements import count_arrangements
from .bench import parse_range, run_bench, write_csv
from .combiner import EMPTY, NELSON_OPPEN, combine, combined_cardinality_emptiness, variable_set
from .demos import DEMOS, run_demo
from .errors import CombError
from .logic import Sort, conj
from .problem import MODE_NAMES, read_problem

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SAT = 10
EXIT_UNSAT = 20


def _si(text: Optional[str]):
    if text is None:
        return None
    return [Sort(s) for s in text.replace(",", " ").split()]


def _sizes(V) -> str:
    return " ".join(f"{s}={len(vs)}" for s, vs in V.items()) or "(empty)"


def cmd_solve(args) -> int:
    problem = read_problem(args.file)
    t1, t2 = problem.theories()
    mode = problem.combination_mode(args.mode, _si(args.si))
    out = combine(problem.purified(), t1, t2, mode, override=args.allow_unsound, workers=args.workers)
    print(f"verdict: {out.verdict}")
    print(f"mode: {mode}")
    if out.violation:
        print(f"warning: hypothesis override, {out.violation}")
    print(f"V: {_sizes(out.variable_set)}")
    approx = " (approximate)" if out.approximate else ""
    print(f"arrangements: {out.arrangements_examined} examined{approx} of {out.arrangements_total}")
    if out.satisfying_arrangement is not None:
        print(f"arrangement: {out.satisfying_arrangement}")
    if out.is_sat and combined_cardinality_emptiness(t1, t2) == EMPTY:
        print(f"contradiction: {t1} and {t2} share no cardinalities, so the true answer is unsat")
    return EXIT_SAT if out.is_sat else EXIT_UNSAT


def cmd_count(args) -> int:
    problem = read_problem(args.file)
    t1, t2 = problem.theories()
    mode = problem.combination_mode(args.mode, _si(args.si))
    purified = problem.purified()
    gamma2 = conj(*purified.gamma2)
    if mode.kind != NELSON_OPPEN and t2.witness is not None:
        gamma2 = t2.witness(gamma2, {v.name for v in purified.variables()})
    V = variable_set(mode, purified.gamma1, gamma2, purified.shared_sorts)
    print(f"mode: {mode}")
    print(f"V: {_sizes(V)}")
    print(f"arrangements: {count_arrangements(V)}")
    return EXIT_OK


def cmd_demo(args) -> int:
    print(run_demo(args.name))
    print(f"demo {args.name}: ok")
    return EXIT_OK


def cmd_bench(args) -> int:
    records = run_bench(args.family, parse_range(args.n), [m.strip() for m in args.modes.split(",") if m.strip()])
    if args.output in (None, "-"):
        write_csv(records, sys.stdout)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_csv(records, fh)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combsmt", description="Many-sorted theory combination engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide a problem file")
    p.add_argument("file")
    p.add_argument("--mode", choices=MODE_NAMES)
    p.add_argument("--si", help="stably infinite sorts for optimized and general modes")
    p.add_argument("--allow-unsound", action="store_true", help="run even if the mode's hypotheses fail")
    p.add_argument("--workers", type=int, default=None, help="check arrangements on a thread pool")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("count", help="print variable-set sizes and the arrangement count")
    p.add_argument("file")
    p.add_argument("--mode", choices=MODE_NAMES)
    p.add_argument("--si")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("demo", help="run a separation demo")
    p.add_argument("name", choices=sorted(DEMOS))
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("bench", help="benchmark a problem family to CSV")
    p.add_argument("--family", default="lists")
    p.add_argument("--n", default="1..5", help="inclusive range A..B")
    p.add_argument("--modes", default="polite,optimized")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CombError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
