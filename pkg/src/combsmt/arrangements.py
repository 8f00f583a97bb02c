"""Arrangements: per-sort partitions of a sorted variable set.

Enumeration follows restricted-growth-string order over variables sorted by
name, and sorts are visited by name, so every enumeration is reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .logic import FiniteInterpretation, Lit, Sort, Var, eq, neq

Partition = tuple[tuple[Var, ...], ...]


class SortedVarSet(Mapping[Sort, frozenset]):
    """Variables filed under their sorts; sorts with no variables are omitted."""

    def __init__(self, variables: Iterable[Var] = ()):
        groups: dict[Sort, set[Var]] = {}
        for v in variables:
            groups.setdefault(v.sort, set()).add(v)
        self._groups = {s: frozenset(vs) for s, vs in sorted(groups.items())}

    @classmethod
    def from_mapping(cls, m: Mapping[Sort, Iterable[Var]]) -> "SortedVarSet":
        out = []
        for s, vs in m.items():
            for v in vs:
                if v.sort != s:
                    raise ValueError(f"{v.name} has sort {v.sort}, filed under {s}")
                out.append(v)
        return cls(out)

    def __getitem__(self, sort: Sort) -> frozenset:
        return self._groups[sort]

    def __iter__(self):
        return iter(self._groups)

    def __len__(self) -> int:
        return len(self._groups)

    def get_vars(self, sort: Sort) -> frozenset:
        return self._groups.get(sort, frozenset())

    def all_vars(self) -> frozenset:
        return frozenset().union(*self._groups.values()) if self._groups else frozenset()

    def sizes(self) -> dict[Sort, int]:
        return {s: len(vs) for s, vs in self._groups.items()}

    def __eq__(self, other) -> bool:
        if isinstance(other, SortedVarSet):
            return self._groups == other._groups
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._groups.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{s}: {{{', '.join(sorted(v.name for v in vs))}}}" for s, vs in self._groups.items())
        return f"SortedVarSet({body})"


@dataclass(frozen=True)
class Arrangement:
    """One partition per sort; blocks and sorts are kept in canonical order."""

    blocks: tuple[tuple[Sort, Partition], ...]

    def partition(self, sort: Sort) -> Partition:
        for s, p in self.blocks:
            if s == sort:
                return p
        return ()

    def block_count(self, sort: Sort) -> int:
        return len(self.partition(sort))

    @property
    def sorts(self) -> tuple[Sort, ...]:
        return tuple(s for s, _ in self.blocks)

    def variables(self) -> frozenset:
        return frozenset(v for _, p in self.blocks for b in p for v in b)

    def __str__(self) -> str:
        parts = []
        for s, p in self.blocks:
            inner = ", ".join("{" + ", ".join(v.name for v in b) + "}" for b in p)
            parts.append(f"{s}: [{inner}]")
        return "; ".join(parts) if parts else "(empty arrangement)"


def _canonical_vars(variables: Iterable[Var]) -> list[Var]:
    return sorted(set(variables), key=lambda v: (v.sort.name, v.name))


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted-growth strings of length n in lexicographic order."""
    if n == 0:
        yield ()
        return
    a = [0] * n
    # m[i] = max(a[0..i])
    m = [0] * n
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] > m[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def enumerate_partitions(variables: Iterable[Var]) -> Iterator[Partition]:
    """Every set partition of ``variables`` exactly once, in RGS order."""
    vs = _canonical_vars(variables)
    if len({v.sort for v in vs}) > 1:
        raise ValueError("enumerate_partitions expects variables of a single sort")
    for rgs in restricted_growth_strings(len(vs)):
        blocks: list[list[Var]] = [[] for _ in range(max(rgs, default=-1) + 1)]
        for v, b in zip(vs, rgs):
            blocks[b].append(v)
        yield tuple(tuple(b) for b in blocks)


def enumerate_arrangements(V: SortedVarSet) -> Iterator[Arrangement]:
    """Cartesian product of per-sort partitions, sorts in name order."""
    sorts = sorted(V)
    per_sort = [list(enumerate_partitions(V[s])) for s in sorts]
    for combo in itertools.product(*per_sort):
        yield Arrangement(tuple(zip(sorts, combo)))


def arrangement_to_formula(a: Arrangement) -> tuple[Lit, ...]:
    """Chain equalities inside blocks, one disequality per pair of blocks."""
    lits: list[Lit] = []
    for _, part in a.blocks:
        for block in part:
            lits.extend(eq(x, y) for x, y in zip(block, block[1:]))
    for _, part in a.blocks:
        reps = [b[0] for b in part]
        lits.extend(neq(x, y) for x, y in itertools.combinations(reps, 2))
    return tuple(lits)


def arrangement_from_blocks(blocks: Mapping[Sort, Sequence[Iterable[Var]]]) -> Arrangement:
    """Build a canonical Arrangement from arbitrary block lists."""
    out = []
    for s in sorted(blocks):
        bl = [tuple(_canonical_vars(b)) for b in blocks[s] if b]
        bl.sort(key=lambda b: (b[0].sort.name, b[0].name))
        if bl:
            out.append((s, tuple(bl)))
    return Arrangement(tuple(out))


def arrangement_of(interp: FiniteInterpretation, V: SortedVarSet) -> Arrangement:
    """The arrangement of ``V`` induced by the element ids ``interp`` assigns."""
    blocks: dict[Sort, list[list[Var]]] = {}
    for s in sorted(V):
        by_elem: dict[object, list[Var]] = {}
        for v in _canonical_vars(V[s]):
            by_elem.setdefault(interp.value(v), []).append(v)
        blocks[s] = list(by_elem.values())
    return arrangement_from_blocks(blocks)


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    """Bell number B(n) via the Bell triangle (exact, arbitrary precision)."""
    if n < 0:
        raise ValueError("Bell numbers are defined for n >= 0")
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def count_arrangements(V: SortedVarSet) -> int:
    return math.prod(bell(len(vs)) for vs in V.values())
