"""Executable separation results: each demo checks its predicted outcome.

A demo returns its narrative report; a mismatch raises
:class:`DemoAssertionFailed`.
"""

from __future__ import annotations

import functools
from typing import Callable

from .combiner import EMPTY, PurifiedProblem, combine, combined_cardinality_emptiness, polite
from .errors import DemoAssertionFailed, HypothesisViolation
from .logic import FiniteInterpretation, Var, card_str, conj, eq, neq
from .oracle import (
    REFUTED,
    UNSAT_ANALYTIC,
    check_smoothness_spot,
    find_finite_witness,
    oracle_decide_combined,
    refute_strong_witness,
)
from .theories import t0, t11, t23, t_atleast, t_even_inf
from .theories.cardinality import DEFAULT_SORT, SIGMA1
from .theories.witnesses import wit_t0_plain, wit_t0_strong


def _expect(ok: bool, what: str) -> None:
    if not ok:
        raise DemoAssertionFailed(what)


def _sizes(m) -> str:
    return ", ".join(f"|{s}|={card_str(n)}" for s, n in sorted(m.items()))


def demo_separation() -> str:
    """Polite combination with a non-strong witness answers Sat for an empty combination."""
    lines = ["T1 = t11 (exactly one element per sort), T2 = t23, Gamma1 = true, Gamma2 = (x = x)"]
    t1, t2 = t11(), t23()
    x = Var("x", SIGMA1)
    problem = PurifiedProblem((), (eq(x, x),), t1.sorts & t2.sorts)
    try:
        combine(problem, t1, t2, polite())
        raise DemoAssertionFailed("the hypothesis check should refuse this run")
    except HypothesisViolation as e:
        lines.append(f"default run refused: {e}")
    out = combine(problem, t1, t2, polite(), override=True)
    lines.append(f"wit(Gamma2) = {out.witnessed_gamma2}")
    lines.append(f"forced polite run: {out.verdict} after {out.arrangements_examined} of {out.arrangements_total} arrangements")
    lines.append(f"satisfying arrangement: {out.satisfying_arrangement}")
    _expect(out.is_sat, "the forced polite run should answer sat")
    emptiness = combined_cardinality_emptiness(t1, t2)
    truth = oracle_decide_combined((eq(x, x),), t1, t2)
    lines.append(f"cardinality emptiness of t11 + t23: {emptiness}")
    lines.append(f"oracle: {truth.verdict}")
    _expect(emptiness == EMPTY and truth.verdict == UNSAT_ANALYTIC, "the combination should be empty")
    lines.append("CONTRADICTION: sat reported for a combination with no models; the witness is not strong")
    return "\n".join(lines)


def demo_plain_witness() -> str:
    """A witness for T>=2 that is finitely witnessing but not strongly so."""
    s = DEFAULT_SORT
    x, w = Var("x", s), Var("w", s)
    theory = t0(s)
    phi = conj(eq(x, x), eq(w, w))
    lines = [f"T0 = structures with at least two elements; phi = {phi}"]
    plain = functools.partial(wit_t0_plain, sort=s)
    model = find_finite_witness(plain(phi), theory, {s})
    _expect(model is not None and model.size(s) == 2, "wit(phi) should have a 2-element finite witness")
    lines.append(f"finite witness of {plain(phi)}: {_sizes(model.sizes())}")
    merged = conj(phi, eq(x, w))
    _expect(find_finite_witness(merged, theory, {s}) is None, "phi and x = w should have no finite witness")
    lines.append("phi and (x = w): no finite witness, a witness would need a single element")
    report = refute_strong_witness(plain, phi, theory, S={s})
    _expect(report.verdict == REFUTED, "the plain witness should be refuted as strong")
    lines.append(f"plain witness refuted under {report.counterexample.arrangement}: {report.detail}")
    strong = functools.partial(wit_t0_strong, sort=s)
    report = refute_strong_witness(strong, phi, theory, extra_vars_bound=1, S={s})
    _expect(report.verdict != REFUTED, "the disequality witness should survive every arrangement")
    lines.append(f"strong witness {strong(phi)}: {report.verdict}")
    return "\n".join(lines)


def demo_even_witness() -> str:
    """T_even_inf: its witness finitely witnesses but some arrangement breaks it."""
    s = DEFAULT_SORT
    x, y = Var("x", s), Var("y", s)
    theory = t_even_inf(s)
    wit = theory.witness
    lines = ["T_even_inf = one sort, even or infinite size"]
    for phi in (eq(x, x), neq(x, y), conj(eq(x, x), eq(y, y))):
        model = find_finite_witness(wit(phi), theory, {s})
        _expect(model is not None, f"wit({phi}) should have a finite witness")
        lines.append(f"wit({phi}) finitely witnessed with {_sizes(model.sizes())}")
    report = refute_strong_witness(wit, eq(x, x), theory, extra_vars_bound=1)
    _expect(report.verdict == REFUTED and report.conclusive, "wit(x = x) should be refuted as strong")
    blocks = report.counterexample.arrangement.block_count(s)
    _expect(blocks % 2 == 1, "the refuting arrangement should have an odd number of classes")
    lines.append(f"refuting arrangement with {blocks} classes: {report.counterexample.arrangement}")
    lines.append(report.detail)
    two = FiniteInterpretation({s: (0, 1)}, {x: 0})
    _expect(not check_smoothness_spot(theory, eq(x, x), two, {s: 3}, {s}), "size 3 should be unreachable")
    lines.append("not smooth: a 2-element model of x = x cannot grow to exactly 3 elements")
    return "\n".join(lines)


def demo_mono_distinct() -> str:
    """The distinct witness for T>=n is strong and the theory is smooth."""
    s = DEFAULT_SORT
    x, y = Var("x", s), Var("y", s)
    lines = []
    for n in (1, 2, 3):
        theory = t_atleast(n, s)
        wit = theory.witness
        for phi in (eq(x, x), neq(x, y), eq(x, y)):
            report = refute_strong_witness(wit, phi, theory, extra_vars_bound=1)
            _expect(report.verdict != REFUTED, f"{wit.name} should be strong on {phi}")
        one = FiniteInterpretation({s: tuple(range(n))}, {x: 0})
        for target in range(n, n + 4):
            _expect(check_smoothness_spot(theory, eq(x, x), one, {s: target}, {s}), "T>=n should be smooth")
        lines.append(f"t_atleast:{n}: {wit.name} strong on all sample formulas; smooth from {n} up to {n + 3}")
    return "\n".join(lines)


DEMOS: dict[str, Callable[[], str]] = {
    "separation": demo_separation,
    "example4": demo_plain_witness,
    "even-witness": demo_even_witness,
    "mono-distinct": demo_mono_distinct,
}


def run_demo(name: str) -> str:
    try:
        fn = DEMOS[name]
    except KeyError:
        raise DemoAssertionFailed(f"unknown demo {name!r}; known: {', '.join(DEMOS)}") from None
    return fn()
