"""Benchmark families and CSV statistics.

The ``lists`` family pairs the integer/bit-vector side

    x = 5,  v = #b0000,  w = w & v

with a chain of n+1 list equations over the integers y1..yn:

    a0 = cons(x, v, a1),  ai = cons(yi, w, a(i+1))  for i = 1..n

where a(n+1) is left free.

Only x, v and w are shared with the first side, so the optimized mode
arranges three variables while the polite mode arranges all of them.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .caps import get_cap
from .combiner import Mode, combine
from .errors import CapExceeded, CombError
from .logic import App, Const, Var, eq
from .problem import ProblemFile, mode_from_name
from .theories.bv4 import BV4
from .theories.intfrag import INT
from .theories.lists import LIST, cons

CSV_COLUMNS = ("family", "n", "mode", "V_int", "V_bv4", "V_other", "arr_total", "arr_examined", "verdict", "ms")
FAMILIES = ("lists",)


@dataclass(frozen=True)
class BenchRecord:
    family: str
    n: int
    mode: str
    v_int: int
    v_bv4: int
    v_other: int
    arr_total: int
    arr_examined: int
    verdict: str
    ms: float

    def row(self) -> tuple:
        return (self.family, self.n, self.mode, self.v_int, self.v_bv4, self.v_other,
                self.arr_total, self.arr_examined, self.verdict, f"{self.ms:.2f}")


def lists_instance(n: int) -> ProblemFile:
    """The n-th member of the lists family as a problem file (n >= 1)."""
    if n < 1:
        raise ValueError("the lists family starts at n = 1")
    x, v, w = Var("x", INT), Var("v", BV4), Var("w", BV4)
    ys = [Var(f"y{i}", INT) for i in range(1, n + 1)]
    lists = [Var(f"a{i}", LIST) for i in range(n + 2)]
    gamma1 = (eq(x, Const(5, INT)), eq(v, Const(0, BV4)), eq(w, App("&", (w, v), BV4)))
    gamma2 = [eq(lists[0], cons(x, v, lists[1]))]
    for i in range(1, n + 1):
        gamma2.append(eq(lists[i], cons(ys[i - 1], w, lists[i + 1])))
    return ProblemFile(
        sorts=(INT, BV4, LIST),
        variables=(x, v, w, *ys, *lists),
        side1="int_frag+bv4",
        side2="list_pair",
        lits1=gamma1,
        lits2=tuple(gamma2),
        mode="optimized",
        si_sorts=(INT,),
    )


def run_instance(problem: ProblemFile, mode: Mode, family: str, n: int) -> BenchRecord:
    t1, t2 = problem.theories()
    purified = problem.purified()
    start = time.perf_counter()
    out = combine(purified, t1, t2, mode)
    ms = (time.perf_counter() - start) * 1000
    sizes = {s.name: len(vs) for s, vs in out.variable_set.items()}
    other = sum(k for name, k in sizes.items() if name not in ("int", "bv4"))
    return BenchRecord(family, n, str(mode.kind), sizes.get("int", 0), sizes.get("bv4", 0), other,
                       out.arrangements_total, out.arrangements_examined, out.verdict, ms)


def run_bench(family: str, ns: Iterable[int], modes: Sequence[str]) -> list[BenchRecord]:
    if family not in FAMILIES:
        raise CombError(f"unknown benchmark family {family!r}; known: {', '.join(FAMILIES)}")
    ns = list(ns)
    cap = get_cap("bench_n_max")
    if ns and max(ns) > cap:
        raise CapExceeded(f"n = {max(ns)} exceeds bench_n_max = {cap}")
    records = []
    for n in ns:
        problem = lists_instance(n)
        for name in modes:
            records.append(run_instance(problem, mode_from_name(name, problem.si_sorts), family, n))
    return records


def write_csv(records: Iterable[BenchRecord], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.row())


def parse_range(text: str) -> range:
    """``"A..B"`` (inclusive) or a single number; ``"3..2"`` is empty."""
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise CombError(f"bad range {text!r}; expected A..B") from None
    return range(a, b + 1)
