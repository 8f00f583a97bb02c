"""Finite lists of pairs: ``cons : e1 x e2 x list -> list`` with ``nil`` and selectors.

The decider flattens selector applications, closes under congruence and
constructor injectivity, then looks for a cons/nil clash, a violated
disequality or a cycle through ``cdr`` positions (no finite list is its own
proper suffix).
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, Sequence

from ..errors import UnguardedSelector, UnsupportedLiteral
from ..logic import (
    App,
    Const,
    Eq,
    FiniteInterpretation,
    Formula,
    FunDecl,
    Lit,
    Signature,
    Sort,
    Term,
    Var,
    conj,
    eq,
    free_vars,
    fresh_vars,
    subterms,
)
from .base import STRONG, STRONGLY_FW, Semantics, SatResult, TheorySpec, UNSAT, Universe, Witness, checked_sat, trivial_split
from .bv4 import BV4
from .euf import CongruenceClosure
from .intfrag import INT

LIST = Sort("list")
SELECTORS = ("car1", "car2", "cdr")


def list_signature(elem1: Sort = INT, elem2: Sort = BV4, lst: Sort = LIST) -> Signature:
    return Signature(
        frozenset({elem1, elem2, lst}),
        {
            "cons": FunDecl("cons", (elem1, elem2, lst), lst),
            "nil": FunDecl("nil", (), lst),
            "car1": FunDecl("car1", (lst,), elem1),
            "car2": FunDecl("car2", (lst,), elem2),
            "cdr": FunDecl("cdr", (lst,), lst),
        },
        {},
        frozenset({lst}),
    )


def cons(e1: Term, e2: Term, rest: Term) -> App:
    return App("cons", (e1, e2, rest), rest.sort)


def nil(lst: Sort = LIST) -> App:
    return App("nil", (), lst)


def _check_literal(l: Lit, sig: Signature) -> None:
    if not isinstance(l.atom, Eq):
        raise UnsupportedLiteral(f"predicate literal in the list theory: {l}")
    for t in l.atom.terms:
        for s in subterms(t):
            if isinstance(s, Const):
                raise UnsupportedLiteral(f"interpreted constant {s} in list literal {l}")
            if isinstance(s, App) and s.fn not in sig.functions:
                raise UnsupportedLiteral(f"symbol {s.fn} outside the list theory in {l}")
            if isinstance(s, Var) and s.sort not in sig.sorts:
                raise UnsupportedLiteral(f"variable {s.name} of foreign sort {s.sort} in {l}")


def _saturate(cc: CongruenceClosure, kept: Sequence[Lit], sel_sorts: tuple[Sort, Sort, Sort]) -> None:
    """Close under selector axioms and injectivity; introduce cons for guarded selectors."""
    nil_term = nil(sel_sorts[2])
    cc.add(nil_term)
    while True:
        cc.close()
        changed = False
        cons_of: dict[Term, App] = {}
        for t in list(cc.apps):
            if t.fn != "cons":
                continue
            r = cc.find(t)
            if r in cons_of:
                for a, b in zip(cons_of[r].args, t.args):
                    changed |= cc.union(a, b)
            else:
                cons_of[r] = t
        guarded = set()
        for l in kept:
            if not l.positive:
                a, b = (cc.find(t) for t in l.atom.terms)
                if cc.find(nil_term) in (a, b):
                    guarded |= {a, b}
        for t in list(cc.apps):
            if t.fn not in SELECTORS:
                continue
            (arg,) = t.args
            r = cc.find(arg)
            if r in cons_of:
                changed |= cc.union(t, cons_of[r].args[SELECTORS.index(t.fn)])
            elif r in guarded:
                parts = [App(fn, (arg,), d) for fn, d in zip(SELECTORS, sel_sorts)]
                c = cons(*parts)
                cc.add(c)
                cc.union(arg, c)
                changed = True
            else:
                raise UnguardedSelector(f"selector {t} needs a cons for {arg} or a guard ({arg} != nil)")
        if not changed:
            return


def _has_cycle(edges: dict[Term, set[Term]]) -> bool:
    state: dict[Term, int] = {}

    def visit(n) -> bool:
        state[n] = 1
        for m in edges.get(n, ()):
            if state.get(m) == 1 or (m not in state and visit(m)):
                return True
        state[n] = 2
        return False

    return any(n not in state and visit(n) for n in list(edges))


def decide_list_fragment(lits: Sequence[Lit], signature: Signature | None = None) -> SatResult:
    """Decide a conjunction of list literals; Sat comes with a tuple-valued term model."""
    sig = signature or list_signature()
    lst = sig.functions["nil"].result
    elem1, elem2 = sig.functions["cons"].args[:2]
    kept = trivial_split(lits)
    if kept is None:
        return UNSAT
    for l in kept:
        _check_literal(l, sig)
    cc = CongruenceClosure()
    for l in kept:
        for t in l.atom.terms:
            cc.add(t)
        if l.positive:
            cc.union(l.atom.lhs, l.atom.rhs)
    _saturate(cc, kept, (elem1, elem2, lst))
    nil_rep = cc.find(nil(lst))
    classes = cc.classes()
    cons_in: dict[Term, App] = {}
    for r, members in classes.items():
        conses = [m for m in members if isinstance(m, App) and m.fn == "cons"]
        if conses:
            if r == nil_rep:
                return UNSAT
            cons_in[r] = min(conses, key=str)
    for l in kept:
        if not l.positive and cc.find(l.atom.lhs) == cc.find(l.atom.rhs):
            return UNSAT
    edges = {r: {cc.find(c.args[2])} for r, c in cons_in.items()}
    if _has_cycle(edges):
        return UNSAT
    return checked_sat(kept, _list_model(cc, classes, cons_in, nil_rep, elem1, elem2, lst))


def _list_model(cc, classes, cons_in, nil_rep, elem1, elem2, lst) -> FiniteInterpretation:
    reps = sorted(classes, key=str)
    elem_ids: dict[Term, int] = {}
    domains: dict[Sort, list] = {elem1: [], elem2: []}
    for r in reps:
        if r.sort in (elem1, elem2):
            elem_ids[r] = len(domains[r.sort])
            domains[r.sort].append(elem_ids[r])
    for s in (elem1, elem2):
        if not domains[s]:
            domains[s].append(0)
    pad = (domains[elem1][0], domains[elem2][0])
    # leaves get pairwise distinct lengths, all longer than any cons chain above them
    stride = len(reps) + 2
    leaves = [r for r in reps if r.sort == lst and r != nil_rep and r not in cons_in]
    values: dict[Term, tuple] = {r: (pad,) * ((i + 1) * stride) for i, r in enumerate(leaves)}
    values[nil_rep] = ()

    def value(r: Term) -> tuple:
        if r not in values:
            c = cons_in[r]
            head = (elem_ids[cc.find(c.args[0])], elem_ids[cc.find(c.args[1])])
            values[r] = (head,) + value(cc.find(c.args[2]))
        return values[r]

    for r in reps:
        if r.sort == lst:
            value(r)
    domains[lst] = sorted(set(values.values()), key=lambda v: (len(v), v))
    assignment = {}
    for t in cc.parent:
        if isinstance(t, Var):
            r = cc.find(t)
            assignment[t] = values[r] if t.sort == lst else elem_ids[r]
    return FiniteInterpretation({s: tuple(d) for s, d in domains.items()}, assignment, list_functions(pad))


def list_functions(pad: tuple = (0, 0)) -> dict:
    """Tuple semantics; selectors of nil return the padding element."""
    return {
        "cons": lambda a, b, l: ((a, b),) + tuple(l),
        "nil": lambda: (),
        "car1": lambda l: l[0][0] if l else pad[0],
        "car2": lambda l: l[0][1] if l else pad[1],
        "cdr": lambda l: l[1:] if l else (),
    }


def wit_list(phi: Formula, avoid: Iterable[str] = (), *, elem_sorts: Sequence[Sort]) -> Formula:
    """Identity, plus a fresh tautology for each element sort without variables in phi."""
    names = set(avoid) | {v.name for v in free_vars(phi)}
    missing = [s for s in elem_sorts if not free_vars(phi, s)]
    fresh = fresh_vars([("e", s) for s in missing], names)
    return conj(phi, *(eq(v, v) for v in fresh))


def _list_universe(elem1: Sort, elem2: Sort):
    def values(hints) -> list[tuple]:
        pairs = list(itertools.product(hints.candidates[elem1], hints.candidates[elem2]))
        out: list[tuple] = [()]
        layer: list[tuple] = [()]
        for _ in range(hints.list_length):
            layer = [(p,) + l for p in pairs for l in layer]
            out += layer
        return out

    return Universe(values, (elem1, elem2))


def list_pair(elem1: Sort = INT, elem2: Sort = BV4, lst: Sort = LIST) -> TheorySpec:
    """Lists of (elem1, elem2) pairs; strongly polite w.r.t. the element sorts."""
    sig = list_signature(elem1, elem2, lst)
    default = (elem1, elem2, lst) == (INT, BV4, LIST)
    name = "list_pair" if default else f"list_pair:{elem1},{elem2}"
    elems = frozenset({elem1, elem2})
    wit = Witness(
        functools.partial(wit_list, elem_sorts=(elem1, elem2)),
        STRONG,
        elems,
        name="wit_list",
        budget="one fresh variable per element sort absent from phi",
    )
    fns = list_functions()
    semantics = Semantics(
        {lst: _list_universe(elem1, elem2)},
        fns,
        {},
    )
    return TheorySpec(
        name=name,
        signature=sig,
        decide=functools.partial(decide_list_fragment, signature=sig),
        stably_infinite_sorts=sig.sorts,
        smooth_sorts=elems,
        witness=wit,
        two_set={STRONGLY_FW: elems},
        semantics=semantics,
    )
