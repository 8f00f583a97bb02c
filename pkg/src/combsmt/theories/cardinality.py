"""Empty-signature theories defined by which domain cardinalities they admit.

Satisfiability of a literal conjunction over an empty signature depends only
on the number of elements each sort must provide, i.e. the chromatic number
of the disequality graph over equality classes.
"""

from __future__ import annotations

import functools
import itertools
from typing import Callable, Iterable, Mapping, Optional, Sequence

from ..caps import get_cap
from ..errors import CapExceeded, NonEmptySignature
from ..logic import (
    INFINITE,
    Cardinality,
    Eq,
    FiniteInterpretation,
    Lit,
    Signature,
    Sort,
    Var,
    is_infinite,
)
from .base import STRONG, PLAIN, STRONGLY_FW, SatResult, TheorySpec, UNSAT, Witness, checked_sat, trivial_split
from .witnesses import wit_even, wit_mono_distinct, wit_t23

DEFAULT_SORT = Sort("s")
SIGMA1 = Sort("s1")
SIGMA2 = Sort("s2")


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _min_coloring(nodes: list, edges: set[frozenset]) -> tuple[int, dict]:
    """Exact minimum proper coloring by backtracking over k = 1, 2, ..."""
    if not nodes:
        return 1, {}
    cap = get_cap("coloring_classes")
    if len(nodes) > cap:
        raise CapExceeded(f"{len(nodes)} equality classes exceed the coloring cap of {cap}")
    adj = {n: {m for m in nodes if frozenset((n, m)) in edges} for n in nodes}
    order = sorted(nodes, key=lambda n: -len(adj[n]))
    for k in range(1, len(nodes) + 1):
        colors: dict = {}

        def place(i: int) -> bool:
            if i == len(order):
                return True
            n = order[i]
            used = {colors[m] for m in adj[n] if m in colors}
            # a new color beyond the highest in use is symmetric, try it once
            top = max(colors.values(), default=-1)
            for c in range(min(k, top + 2)):
                if c not in used:
                    colors[n] = c
                    if place(i + 1):
                        return True
                    del colors[n]
            return False

        if place(0):
            return k, dict(colors)
    raise AssertionError("unreachable")


def _check_empty(lits: Iterable[Lit]) -> None:
    for l in lits:
        a = l.atom
        if not isinstance(a, Eq) or not all(isinstance(t, Var) for t in a.terms):
            raise NonEmptySignature(f"literal {l} is outside the empty signature")


def coloring(lits: Sequence[Lit], sorts: Iterable[Sort] = ()) -> Optional[tuple[dict[Sort, int], dict[Var, int]]]:
    """Minimum sizes per sort plus a variable coloring realising them, or None if unsat."""
    kept = trivial_split(lits)
    if kept is None:
        return None
    _check_empty(kept)
    uf = _UnionFind()
    variables: set[Var] = set()
    for l in kept:
        variables.update(l.atom.terms)
        for v in l.atom.terms:
            uf.find(v)
        if l.positive:
            uf.union(l.atom.lhs, l.atom.rhs)
    edges: set[frozenset] = set()
    for l in kept:
        if not l.positive:
            a, b = uf.find(l.atom.lhs), uf.find(l.atom.rhs)
            if a == b:
                return None
            edges.add(frozenset((a, b)))
    sizes: dict[Sort, int] = {s: 1 for s in sorts}
    colors: dict[Var, int] = {}
    by_sort: dict[Sort, set] = {}
    for v in variables:
        by_sort.setdefault(v.sort, set()).add(uf.find(v))
    for s, roots in sorted(by_sort.items()):
        roots_list = sorted(roots, key=lambda v: v.name)
        k, col = _min_coloring(roots_list, edges)
        sizes[s] = k
        for v in variables:
            if v.sort == s:
                colors[v] = col[uf.find(v)]
    return sizes, colors


def min_model_sizes(lits: Sequence[Lit], sorts: Iterable[Sort] = ()) -> Optional[dict[Sort, int]]:
    """Per-sort minimum domain sizes of a model of ``lits``; None means Unsat.

    Sorts listed in ``sorts`` but without variables report 1.
    """
    res = coloring(lits, sorts)
    return None if res is None else res[0]


def _grid(theory_sorts: Sequence[Sort], bound: int) -> Iterable[dict[Sort, Cardinality]]:
    values: list[Cardinality] = list(range(1, bound + 1)) + [INFINITE]
    for combo in itertools.product(values, repeat=len(theory_sorts)):
        yield dict(zip(theory_sorts, combo))


def _map_key(m: Mapping[Sort, Cardinality]):
    finite_part = [v for v in m.values() if not is_infinite(v)]
    n_inf = len(m) - len(finite_part)
    return (n_inf, sum(finite_part), tuple(m.values()))


def decide_cardinality_theory(
    lits: Sequence[Lit],
    accepts: Callable[[Mapping[Sort, Cardinality]], bool],
    sorts: Sequence[Sort],
    threshold: int = 0,
) -> SatResult:
    """Decide a literal conjunction in the theory whose structures ``accepts`` admits.

    Sat iff some accepted cardinality map dominates the minimum model sizes.
    Candidates range over {1..K, Infinite} per sort with K the larger of the
    minimum sizes and the theory threshold, plus a slack of 2 (enough for any
    threshold or parity condition).
    """
    sorts = sorted(sorts)
    res = coloring(lits, sorts)
    if res is None:
        return UNSAT
    mins, colors = res
    for v in colors:
        if v.sort not in sorts:
            raise NonEmptySignature(f"variable {v.name} has sort {v.sort} outside the theory")
    bound = max(max(mins.values(), default=1), threshold) + 2
    best = None
    for m in _grid(sorts, bound):
        if all(m[s] >= mins[s] for s in sorts) and accepts(m):
            if best is None or _map_key(m) < _map_key(best):
                best = m
    if best is None:
        return UNSAT
    kept = trivial_split(lits) or []
    if any(is_infinite(c) for c in best.values()):
        return SatResult(True, None, best)
    model = FiniteInterpretation({s: tuple(range(best[s])) for s in sorts}, dict(colors))
    return checked_sat(kept, model, best)


# --- roster entries -----------------------------------------------------------


def _cardinality_theory(name, sorts, accepts, threshold, monotone, si, smooth, witness=None, two_set=None):
    sig = Signature(frozenset(sorts))
    decide = functools.partial(decide_cardinality_theory, accepts=accepts, sorts=tuple(sorts), threshold=threshold)
    return TheorySpec(
        name=name,
        signature=sig,
        decide=decide,
        accepts=accepts,
        stably_infinite_sorts=frozenset(si),
        smooth_sorts=frozenset(smooth),
        witness=witness,
        two_set=two_set or {},
        threshold=threshold,
        threshold_monotone=monotone,
    )


def t_atleast(n: int, sort: Sort = DEFAULT_SORT) -> TheorySpec:
    """T>=n: all one-sorted structures with at least n elements."""
    if n < 1:
        raise ValueError("t_atleast needs n >= 1")
    name = f"t_atleast:{n}" + ("" if sort == DEFAULT_SORT else f"@{sort}")
    wit = Witness(
        functools.partial(wit_mono_distinct, n=n, sort=sort),
        STRONG,
        frozenset({sort}),
        name=f"wit_mono_distinct[{n}]",
        budget=f"{n} fresh {sort}",
    )
    return _cardinality_theory(
        name,
        [sort],
        lambda m: m[sort] >= n,
        threshold=n,
        monotone=True,
        si=[sort],
        smooth=[sort],
        witness=wit,
        two_set={STRONGLY_FW: frozenset({sort})},
    )


def t23(sort1: Sort = SIGMA1, sort2: Sort = SIGMA2) -> TheorySpec:
    """Two sorts: |s1| = 2 with s2 infinite, or both at least 3."""

    def accepts(m):
        a, b = m[sort1], m[sort2]
        return (a == 2 and is_infinite(b)) or (a >= 3 and b >= 3)

    wit = Witness(
        functools.partial(wit_t23, sort1=sort1, sort2=sort2),
        PLAIN,
        frozenset({sort1, sort2}),
        name="wit_t23",
        budget=f"3 fresh {sort1}, 3 fresh {sort2}",
    )
    return _cardinality_theory(
        "t23", [sort1, sort2], accepts, threshold=3, monotone=True,
        si=[sort1, sort2], smooth=[sort1, sort2], witness=wit,
    )


def t11(sort1: Sort = SIGMA1, sort2: Sort = SIGMA2) -> TheorySpec:
    """Two sorts, exactly one element each."""
    return _cardinality_theory(
        "t11", [sort1, sort2], lambda m: m[sort1] == 1 and m[sort2] == 1,
        threshold=1, monotone=True, si=[], smooth=[],
    )


def t_even_inf(sort: Sort = DEFAULT_SORT) -> TheorySpec:
    """One sort whose size is even or infinite."""
    name = "t_even_inf" + ("" if sort == DEFAULT_SORT else f"@{sort}")
    wit = Witness(
        functools.partial(wit_even, sort=sort),
        PLAIN,
        frozenset({sort}),
        name="wit_even",
        budget=f"1 fresh {sort}, disjunction over partitions",
    )
    return _cardinality_theory(
        name, [sort], lambda m: is_infinite(m[sort]) or m[sort] % 2 == 0,
        threshold=2, monotone=False, si=[sort], smooth=[], witness=wit,
    )


def t0(sort: Sort = DEFAULT_SORT) -> TheorySpec:
    """T0 is T>=2."""
    return t_atleast(2, sort)
