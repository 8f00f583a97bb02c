"""Witness functions for the roster theories.

Every function takes the formula and a set of names to avoid; fresh names
use the reserved ``#`` suffix so they never collide with parsed input.
"""

from __future__ import annotations

from typing import Iterable

from ..arrangements import arrangement_to_formula, enumerate_arrangements, SortedVarSet
from ..caps import get_cap
from ..errors import TooManyVariables
from ..logic import (
    Formula,
    Sort,
    build_distinct,
    conj,
    disj,
    eq,
    free_vars,
    fresh_vars,
    neq,
)


def _names(phi: Formula, avoid: Iterable[str]) -> set[str]:
    return set(avoid) | {v.name for v in free_vars(phi)}


def wit_t0_plain(phi: Formula, avoid: Iterable[str] = (), *, sort: Sort) -> Formula:
    """phi and two fresh tautologies; a witness for T>=2, but not a strong one."""
    w1, w2 = fresh_vars([("w", sort), ("w", sort)], _names(phi, avoid))
    return conj(phi, eq(w1, w1), eq(w2, w2))


def wit_t0_strong(phi: Formula, avoid: Iterable[str] = (), *, sort: Sort) -> Formula:
    w1, w2 = fresh_vars([("w", sort), ("w", sort)], _names(phi, avoid))
    return conj(phi, neq(w1, w2))


def wit_t23(phi: Formula, avoid: Iterable[str] = (), *, sort1: Sort, sort2: Sort) -> Formula:
    """Three fresh tautologies per sort."""
    fresh = fresh_vars([("x", sort1)] * 3 + [("y", sort2)] * 3, _names(phi, avoid))
    return conj(phi, *(eq(v, v) for v in fresh))


def wit_even(phi: Formula, avoid: Iterable[str] = (), *, sort: Sort, cap: int | None = None) -> Formula:
    """phi and the disjunction of all even-class arrangements of fv(phi) + {w}.

    When no partition has an even number of classes the disjunction is empty,
    i.e. false.
    """
    limit = get_cap("even_vars") if cap is None else cap
    fv = free_vars(phi)
    if len(fv) > limit:
        raise TooManyVariables(f"wit_even over {len(fv)} variables exceeds the cap of {limit}")
    (w,) = fresh_vars([("w", sort)], _names(phi, avoid))
    V = SortedVarSet(fv | {w})
    disjuncts = [
        conj(*arrangement_to_formula(a))
        for a in enumerate_arrangements(V)
        if a.block_count(sort) % 2 == 0
    ]
    return conj(phi, disj(*disjuncts))


def wit_mono_distinct(phi: Formula, avoid: Iterable[str] = (), *, n: int, sort: Sort) -> Formula:
    """phi and distinct(w1..wn) for fresh w's; strong for T>=n."""
    if n < 1:
        raise ValueError("wit_mono_distinct needs n >= 1")
    ws = fresh_vars([("w", sort)] * n, _names(phi, avoid))
    if n == 1:
        # distinct(w1) is empty; keep w1 named so a witness domain is never empty
        return conj(phi, eq(ws[0], ws[0]))
    return conj(phi, build_distinct(ws))


def wit_identity(phi: Formula, avoid: Iterable[str] = ()) -> Formula:
    return phi
