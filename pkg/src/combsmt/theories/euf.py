"""Uninterpreted functions and predicates, decided by congruence closure."""

from __future__ import annotations

import functools
import itertools
from typing import Optional, Sequence

from ..errors import UnsupportedLiteral
from ..logic import App, Const, Eq, FiniteInterpretation, Lit, Signature, Term, subterms
from .base import SatResult, TheorySpec, UNSAT, checked_sat, trivial_split


class CongruenceClosure:
    """Union-find over ground terms, closed under congruence by fixpoint iteration.

    Desk-scale inputs have a few dozen terms, so each round simply rebuilds
    the signature table.
    """

    def __init__(self):
        self.parent: dict[Term, Term] = {}
        self.apps: list[App] = []

    def add(self, t: Term) -> Term:
        for s in subterms(t):
            if s not in self.parent:
                self.parent[s] = s
                if isinstance(s, App) and s.args:
                    self.apps.append(s)
        return t

    def find(self, t: Term) -> Term:
        self.add(t)
        while self.parent[t] != t:
            self.parent[t] = self.parent[self.parent[t]]
            t = self.parent[t]
        return t

    def union(self, a: Term, b: Term) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep a stable representative: the smaller printed form
        if str(rb) < str(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def signature_key(self, t: App):
        return (t.fn, tuple(self.find(a) for a in t.args))

    def close(self) -> None:
        changed = True
        while changed:
            changed = False
            table: dict = {}
            for t in self.apps:
                key = self.signature_key(t)
                if key in table:
                    changed |= self.union(table[key], t)
                else:
                    table[key] = t

    def classes(self) -> dict[Term, list[Term]]:
        out: dict[Term, list[Term]] = {}
        for t in self.parent:
            out.setdefault(self.find(t), []).append(t)
        return out


def _quotient_model(cc: CongruenceClosure, signature: Optional[Signature], pos_preds) -> FiniteInterpretation:
    reps = sorted(cc.classes(), key=str)
    ids: dict[Term, int] = {}
    domains: dict = {}
    for r in reps:
        dom = domains.setdefault(r.sort, [])
        ids[r] = len(dom)
        dom.append(ids[r])
    sorts = set(domains)
    if signature is not None:
        sorts |= signature.sorts
    for s in sorts:
        domains.setdefault(s, [0])
    tables: dict[str, dict] = {}
    for t in cc.apps:
        args = tuple(ids[cc.find(a)] for a in t.args)
        tables.setdefault(t.fn, {})[args] = ids[cc.find(t)]
    # constants (0-ary applications) and any declared symbol without occurrences
    for t in cc.parent:
        if isinstance(t, App) and not t.args:
            tables.setdefault(t.fn, {})[()] = ids[cc.find(t)]
    if signature is not None:
        for decl in signature.functions.values():
            table = tables.setdefault(decl.name, {})
            for args in itertools.product(*(domains[s] for s in decl.args)):
                table.setdefault(args, domains[decl.result][0])
    assignment = {t: ids[cc.find(t)] for t in cc.parent if not isinstance(t, (App, Const))}
    preds = {name: frozenset(tuple(ids[cc.find(a)] for a in args) for args in rows) for name, rows in pos_preds.items()}
    if signature is not None:
        for name in signature.predicates:
            preds.setdefault(name, frozenset())
    return FiniteInterpretation({s: tuple(d) for s, d in domains.items()}, assignment, tables, preds)


def decide_euf(lits: Sequence[Lit], signature: Optional[Signature] = None) -> SatResult:
    """Congruence closure; Sat returns the quotient term model."""
    kept = trivial_split(lits)
    if kept is None:
        return UNSAT
    cc = CongruenceClosure()
    for l in kept:
        for t in l.atom.terms:
            for s in subterms(t):
                if isinstance(s, Const):
                    raise UnsupportedLiteral(f"interpreted constant {s} in uninterpreted literal {l}")
            cc.add(t)
        if l.positive and isinstance(l.atom, Eq):
            cc.union(l.atom.lhs, l.atom.rhs)
    cc.close()
    pos_preds: dict[str, set] = {}
    for l in kept:
        if isinstance(l.atom, Eq):
            if not l.positive and cc.find(l.atom.lhs) == cc.find(l.atom.rhs):
                return UNSAT
        elif l.positive:
            pos_preds.setdefault(l.atom.name, set()).add(l.atom.args)
    for l in kept:
        if not isinstance(l.atom, Eq) and not l.positive:
            key = tuple(cc.find(a) for a in l.atom.args)
            for args in pos_preds.get(l.atom.name, ()):
                if tuple(cc.find(a) for a in args) == key:
                    return UNSAT
    return checked_sat(kept, _quotient_model(cc, signature, pos_preds))


def euf(signature: Signature, name: str = "euf") -> TheorySpec:
    """Free theory over ``signature``: stably infinite and smooth on every sort."""
    return TheorySpec(
        name=name,
        signature=signature,
        decide=functools.partial(decide_euf, signature=signature),
        stably_infinite_sorts=signature.sorts,
        smooth_sorts=signature.sorts,
    )
