"""A literal fragment of integer arithmetic: difference constraints.

Accepted literals compare terms of the form ``x``, ``c``, ``x + c`` or
``x - c`` with ``=``, ``distinct``, ``<`` and ``<=`` (and their negations).
Sums of two variables are rejected with :class:`UnsupportedLiteral`.
"""

from __future__ import annotations

import operator
from typing import Optional, Sequence

from ..errors import UnsupportedLiteral
from ..logic import App, Const, Eq, FiniteInterpretation, FunDecl, Lit, PredDecl, Signature, Sort, Term, Var, subterms
from .base import Semantics, SatResult, TheorySpec, UNSAT, Universe, checked_sat, trivial_split

INT = Sort("int")

INT_SIGNATURE = Signature(
    frozenset({INT}),
    {"+": FunDecl("+", (INT, INT), INT), "-": FunDecl("-", (INT, INT), INT)},
    {"<": PredDecl("<", (INT, INT)), "<=": PredDecl("<=", (INT, INT))},
    frozenset({INT}),
)

INT_FUNCTIONS = {"+": operator.add, "-": operator.sub}
INT_PREDICATES = {"<": operator.lt, "<=": operator.le}

# (variable or None for the constant 0, offset)
Linear = tuple[Optional[Var], int]


def _linear(t: Term, lit: Lit) -> Linear:
    if isinstance(t, Var):
        return (t, 0)
    if isinstance(t, Const):
        return (None, int(t.value))
    if isinstance(t, App) and t.fn in ("+", "-") and len(t.args) == 2:
        a, b = t.args
        if t.fn == "+" and isinstance(a, Const):
            a, b = b, a
        if isinstance(b, Const):
            base, off = _linear(a, lit)
            if base is not None and off:
                raise UnsupportedLiteral(f"nested offset in {lit}")
            k = int(b.value)
            return (base, off + (k if t.fn == "+" else -k))
    raise UnsupportedLiteral(f"literal outside the integer fragment: {lit}")


def _solve(edges: list[tuple], nodes: list) -> Optional[dict]:
    """Bellman-Ford over constraints u - v <= c given as edges (v, u, c)."""
    dist = {n: 0 for n in nodes}
    for _ in range(len(nodes)):
        changed = False
        for v, u, c in edges:
            if dist[v] + c < dist[u]:
                dist[u] = dist[v] + c
                changed = True
        if not changed:
            break
    else:
        if any(dist[v] + c < dist[u] for v, u, c in edges):
            return None
    shift = dist[None]
    return {n: d - shift for n, d in dist.items()}


def _le(a: Linear, b: Linear, strict: bool) -> tuple:
    # a.var + a.off <= b.var + b.off (- 1 if strict)  ->  a.var - b.var <= b.off - a.off
    return (b[0], a[0], b[1] - a[1] - (1 if strict else 0))


def decide_int_fragment(lits: Sequence[Lit]) -> SatResult:
    kept = trivial_split(lits)
    if kept is None:
        return UNSAT
    edges: list[tuple] = []
    diseqs: list[tuple[Linear, Linear]] = []
    nodes: set = {None}
    for l in kept:
        a = l.atom
        if isinstance(a, Eq):
            if a.sort != INT:
                raise UnsupportedLiteral(f"non-integer equality {l}")
            x, y = _linear(a.lhs, l), _linear(a.rhs, l)
            if l.positive:
                edges += [_le(x, y, False), _le(y, x, False)]
            else:
                diseqs.append((x, y))
        elif a.name in ("<", "<="):
            x, y = (_linear(t, l) for t in a.args)
            strict = a.name == "<"
            edges.append(_le(x, y, strict) if l.positive else _le(y, x, not strict))
        else:
            raise UnsupportedLiteral(f"literal outside the integer fragment: {l}")
        for t in a.terms:
            for s in subterms(t):
                if isinstance(s, Var):
                    nodes.add(s)
    node_list = sorted(nodes, key=lambda n: "" if n is None else n.name)

    def search(extra: list[tuple]) -> Optional[dict]:
        sol = _solve(edges + extra, node_list)
        if sol is None:
            return None
        val = lambda t: sol[t[0]] + t[1]
        for x, y in diseqs:
            if val(x) == val(y):
                return search(extra + [_le(x, y, True)]) or search(extra + [_le(y, x, True)])
        return sol

    sol = search([])
    if sol is None:
        return UNSAT
    assignment = {v: sol[v] for v in node_list if v is not None}
    values = {sum_value(s, assignment) for l in kept for t in l.atom.terms for s in subterms(t)} or {0}
    model = FiniteInterpretation({INT: tuple(sorted(values))}, assignment, dict(INT_FUNCTIONS), dict(INT_PREDICATES))
    return checked_sat(kept, model)


def sum_value(t: Term, assignment) -> int:
    if isinstance(t, Var):
        return assignment[t]
    if isinstance(t, Const):
        return int(t.value)
    return INT_FUNCTIONS[t.fn](*(sum_value(a, assignment) for a in t.args))


def _int_universe(hints) -> list[int]:
    """Values around the constants, with room for every variable to spread out.

    ``term_counts`` holds the number of distinct integer variables; offsets
    are the nonzero constants, so the margin covers chains of them.
    """
    consts = set(hints.constants.get(INT, ())) | {0}
    step = max((abs(c) for c in consts), default=1) or 1
    k = (hints.term_counts.get(INT, 0) + 1) * step
    values = range(min(consts) - k, max(consts) + k + 1)
    # nearest to the constants first, so small models are found early
    return sorted(values, key=lambda v: (min(abs(v - c) for c in consts), v))


INT_SEMANTICS = Semantics({INT: Universe(_int_universe)}, INT_FUNCTIONS, INT_PREDICATES)


def int_frag() -> TheorySpec:
    return TheorySpec(
        name="int_frag",
        signature=INT_SIGNATURE,
        decide=decide_int_fragment,
        stably_infinite_sorts=frozenset({INT}),
        semantics=INT_SEMANTICS,
    )
