"""Seeded generator of small purified combination problems."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from combsmt.combiner import (
    Mode,
    PurifiedProblem,
    check_mode_applicability,
    general,
    nelson_oppen,
    optimized,
    polite,
)
from combsmt.errors import HypothesisViolation
from combsmt.logic import App, Const, FunDecl, Lit, Pred, Signature, Sort, Var, eq, neq
from combsmt.theories import INT, get_theory, t11, t23, t_atleast, t_even_inf
from combsmt.theories.cardinality import SIGMA1
from combsmt.theories.lists import LIST, cons, nil

U = Sort("u")
SEED = 20240611


@dataclass(frozen=True)
class Case:
    label: str
    problem: PurifiedProblem
    t1: object
    t2: object

    @property
    def lits(self):
        return self.problem.gamma1 + self.problem.gamma2


def applicable_modes(t1, t2, shared) -> list[Mode]:
    shared = sorted(shared)
    candidates = [nelson_oppen(), polite()]
    for k in range(len(shared) + 1):
        for si in itertools.combinations(shared, k):
            candidates.append(optimized(si))
            candidates += [general(c, si) for c in (1, 2, 3)]
    out = []
    for m in candidates:
        try:
            check_mode_applicability(t1, t2, m, shared)
        except HypothesisViolation:
            continue
        out.append(m)
    return out


def _eq_lits(rng: random.Random, variables, n: int) -> list[Lit]:
    lits = []
    for _ in range(n):
        sort = rng.choice(sorted({v.sort for v in variables}))
        pool = [v for v in variables if v.sort == sort]
        a, b = rng.sample(pool, 2) if len(pool) > 1 else (pool[0], pool[0])
        lits.append(eq(a, b) if rng.random() < 0.45 else neq(a, b))
    return lits


CARDINALITY_PAIRS = [
    ("t_atleast:2 | t_atleast:3", lambda: t_atleast(2), lambda: t_atleast(3)),
    ("t23 | t_atleast:2@s1", lambda: t23(), lambda: t_atleast(2, SIGMA1)),
    ("t11 | t_atleast:3@s1", lambda: t11(), lambda: t_atleast(3, SIGMA1)),
    ("t_even_inf | t_atleast:2", lambda: t_even_inf(), lambda: t_atleast(2)),
    ("t_even_inf | t_atleast:3", lambda: t_even_inf(), lambda: t_atleast(3)),
    ("t_atleast:2 | t_even_inf", lambda: t_atleast(2), lambda: t_even_inf()),
    ("t23 | t23", lambda: t23(), lambda: t23()),
]


def cardinality_cases(rng: random.Random, per_pair: int) -> list[Case]:
    cases = []
    for label, make1, make2 in CARDINALITY_PAIRS:
        t1, t2 = make1(), make2()
        shared = t1.sorts & t2.sorts
        shared_vars = [Var(n, s) for s in sorted(shared) for n in ("x", "y", "z")][:3]
        private1 = [Var(f"m{s}", s) for s in sorted(t1.sorts - shared)]
        private2 = [Var(f"n{s}", s) for s in sorted(t2.sorts - shared)]
        for _ in range(per_pair):
            g1 = _eq_lits(rng, shared_vars + private1, rng.randint(0, 3))
            g2 = _eq_lits(rng, shared_vars + private2, rng.randint(1, 3))
            cases.append(Case(label, PurifiedProblem(tuple(g1), tuple(g2), shared), t1, t2))
    return cases


def list_theories():
    sig = Signature(
        frozenset({U, INT}),
        {"f": FunDecl("f", (U,), U), "g": FunDecl("g", (INT,), U)},
    )
    return get_theory("euf+int_frag", sig), get_theory("list_pair:int,u")


def _int_lit(rng, x, y) -> Lit:
    k = Const(rng.randint(0, 2), INT)
    choice = rng.randrange(6)
    if choice == 0:
        return Lit(Pred("<", (x, y)), True)
    if choice == 1:
        return Lit(Pred("<=", (x, y)), rng.random() < 0.5)
    if choice == 2:
        return eq(x, k)
    if choice == 3:
        return eq(x, App("+", (y, Const(1, INT)), INT))
    if choice == 4:
        return neq(x, y)
    return eq(x, y)


def list_cases(rng: random.Random, count: int) -> list[Case]:
    t1, t2 = list_theories()
    shared = t1.sorts & t2.sorts
    x, y, p, q = Var("x", INT), Var("y", INT), Var("p", U), Var("q", U)
    a, b, c = Var("a", LIST), Var("b", LIST), Var("c", LIST)
    f = lambda t: App("f", (t,), U)
    g = lambda t: App("g", (t,), U)
    side1 = [
        lambda: _int_lit(rng, x, y),
        lambda: _int_lit(rng, y, x),
        lambda: eq(f(p), q) if rng.random() < 0.5 else neq(f(p), p),
        lambda: eq(g(x), p) if rng.random() < 0.5 else neq(g(x), g(y)),
        lambda: eq(p, q) if rng.random() < 0.3 else neq(p, q),
    ]
    side2 = [
        lambda: eq(a, cons(x, p, b)),
        lambda: eq(b, cons(y, p, c)) if rng.random() < 0.5 else eq(b, cons(y, p, nil())),
        lambda: neq(a, b),
        lambda: eq(b, nil()) if rng.random() < 0.5 else neq(b, nil()),
        lambda: eq(c, cons(x, p, nil())),
        lambda: neq(x, y) if rng.random() < 0.5 else eq(x, y),
        lambda: eq(a, c),
    ]
    cases = []
    for _ in range(count):
        g1 = [rng.choice(side1)() for _ in range(rng.randint(1, 3))]
        g2 = [rng.choice(side2)() for _ in range(rng.randint(1, 3))]
        cases.append(Case("euf+int_frag | list_pair:int,u", PurifiedProblem(tuple(g1), tuple(g2), shared), t1, t2))
    return cases


def corpus(seed: int = SEED, per_pair: int = 20, lists: int = 60) -> list[Case]:
    rng = random.Random(seed)
    return cardinality_cases(rng, per_pair) + list_cases(rng, lists)
