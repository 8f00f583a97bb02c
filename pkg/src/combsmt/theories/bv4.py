"""Bit-vectors of width 4 with bitwise operators, decided by exhaustive search."""

from __future__ import annotations

from typing import Sequence

from ..caps import get_cap
from ..errors import TooManyVariables, UnsupportedLiteral
from ..logic import (
    CONST_FORMATS,
    Const,
    Eq,
    FiniteInterpretation,
    FunDecl,
    Lit,
    Signature,
    Sort,
    Var,
    term_vars,
)
from .base import Semantics, SatResult, TheorySpec, UNSAT, Universe, checked_sat, trivial_split

BV4 = Sort("bv4")
MASK = 0b1111

CONST_FORMATS[BV4.name] = lambda v: f"#b{v:04b}"

BV4_FUNCTIONS = {
    "&": lambda a, b: a & b,
    "|": lambda a, b: a | b,
    "^": lambda a, b: a ^ b,
    "~": lambda a: ~a & MASK,
}

BV4_SIGNATURE = Signature(
    frozenset({BV4}),
    {
        "&": FunDecl("&", (BV4, BV4), BV4),
        "|": FunDecl("|", (BV4, BV4), BV4),
        "^": FunDecl("^", (BV4, BV4), BV4),
        "~": FunDecl("~", (BV4,), BV4),
    },
    {},
    frozenset({BV4}),
)

DOMAIN = tuple(range(16))


def bv(bits: str) -> Const:
    """A constant from a 4-character bit string such as ``"0110"``."""
    if len(bits) != 4 or set(bits) - {"0", "1"}:
        raise ValueError(f"not a 4-bit constant: {bits!r}")
    return Const(int(bits, 2), BV4)


def decide_bv4(lits: Sequence[Lit], cap: int | None = None) -> SatResult:
    """Backtracking over the 16 values of each variable."""
    kept = trivial_split(lits)
    if kept is None:
        return UNSAT
    for l in kept:
        if not isinstance(l.atom, Eq) or l.atom.sort != BV4:
            raise UnsupportedLiteral(f"literal outside the bv4 theory: {l}")
    limit = get_cap("bv4_vars") if cap is None else cap
    variables = sorted({v for l in kept for t in l.atom.terms for v in term_vars(t)})
    if len(variables) > limit:
        raise TooManyVariables(f"{len(variables)} bv4 variables exceed the cap of {limit}")
    # check each literal as soon as its last variable is assigned
    position = {v: i for i, v in enumerate(variables)}
    ready: list[list[Lit]] = [[] for _ in range(len(variables) + 1)]
    for l in kept:
        vs = [position[v] for t in l.atom.terms for v in term_vars(t)]
        ready[max(vs) + 1 if vs else 0].append(l)
    assignment: dict[Var, int] = {}
    interp = lambda: FiniteInterpretation({BV4: DOMAIN}, assignment, BV4_FUNCTIONS)

    def holds(batch: list[Lit]) -> bool:
        m = interp()
        return all(m.holds(l.atom) == l.positive for l in batch)

    def search(i: int) -> bool:
        if i == len(variables):
            return True
        v = variables[i]
        for value in DOMAIN:
            assignment[v] = value
            if holds(ready[i + 1]) and search(i + 1):
                return True
        del assignment[v]
        return False

    if not holds(ready[0]) or not search(0):
        return UNSAT
    return checked_sat(kept, interp())


BV4_SEMANTICS = Semantics({BV4: Universe(lambda hints: DOMAIN)}, BV4_FUNCTIONS, {})


def bv4() -> TheorySpec:
    return TheorySpec(
        name="bv4",
        signature=BV4_SIGNATURE,
        decide=decide_bv4,
        semantics=BV4_SEMANTICS,
    )
