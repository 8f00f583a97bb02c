"""Purification and arrangement-based combination of two theories.

Four modes share one loop: pick the shared variable set V, enumerate the
arrangements of V in canonical order and stop at the first one that both
sides accept.  The modes differ only in V and in the hypotheses checked
beforehand.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .arrangements import (
    Arrangement,
    SortedVarSet,
    arrangement_to_formula,
    count_arrangements,
    enumerate_arrangements,
)
from .caps import get_cap
from .errors import HypothesisViolation, NonDisjointSignatures, UnknownSymbol
from .logic import (
    INFINITE,
    App,
    Const,
    Eq,
    FiniteInterpretation,
    Formula,
    Lit,
    Pred,
    Signature,
    Sort,
    Term,
    Var,
    conj,
    fresh_var,
    free_vars,
    to_dnf,
)
from .theories.base import (
    SI_TWO,
    SMOOTH_TWO,
    STRONGLY_FW,
    STRONGLY_SI,
    SatResult,
    TheorySpec,
    UNSAT,
    checked_sat,
)

NELSON_OPPEN = "nelson-oppen"
POLITE = "polite"
OPTIMIZED = "optimized"
GENERAL = "general"
MODE_KINDS = (NELSON_OPPEN, POLITE, OPTIMIZED, GENERAL)

SAT = "sat"
UNSAT_VERDICT = "unsat"


@dataclass(frozen=True)
class Mode:
    """A combination mode; ``si_sorts`` is only meaningful for optimized and general."""

    kind: str
    si_sorts: frozenset[Sort] = frozenset()
    case: int = 0

    def __post_init__(self):
        if self.kind not in MODE_KINDS:
            raise ValueError(f"unknown mode {self.kind!r}")
        if self.kind == GENERAL and self.case not in (1, 2, 3):
            raise ValueError("general mode needs case 1, 2 or 3")
        object.__setattr__(self, "si_sorts", frozenset(self.si_sorts))

    def nsi_sorts(self, shared: Iterable[Sort]) -> frozenset[Sort]:
        return frozenset(shared) - self.si_sorts

    def __str__(self) -> str:
        si = ",".join(sorted(s.name for s in self.si_sorts))
        if self.kind == OPTIMIZED:
            return f"optimized(si={si})"
        if self.kind == GENERAL:
            return f"general{self.case}(si={si})"
        return self.kind


def nelson_oppen() -> Mode:
    return Mode(NELSON_OPPEN)


def polite() -> Mode:
    return Mode(POLITE)


def optimized(si_sorts: Iterable[Sort]) -> Mode:
    return Mode(OPTIMIZED, frozenset(si_sorts))


def general(case: int, si_sorts: Iterable[Sort]) -> Mode:
    return Mode(GENERAL, frozenset(si_sorts), case)


# --- purification -------------------------------------------------------------


@dataclass(frozen=True)
class PurifiedProblem:
    gamma1: tuple[Lit, ...]
    gamma2: tuple[Lit, ...]
    shared_sorts: frozenset[Sort]
    origin: Mapping[Var, Term] = field(default_factory=dict)

    def variables(self) -> frozenset[Var]:
        return free_vars(self.gamma1) | free_vars(self.gamma2)


def _owner(sym_kind: str, t, sig1: Signature, sig2: Signature) -> Optional[int]:
    """1 or 2 for the side interpreting the top symbol; None for variables."""
    if sym_kind == "var":
        return None
    for side, sig in ((1, sig1), (2, sig2)):
        if sym_kind == "const" and t.sort in sig.value_sorts:
            return side
        if sym_kind == "fun" and t.fn in sig.functions:
            return side
        if sym_kind == "pred" and t.name in sig.predicates:
            return side
    label = t if sym_kind == "const" else (t.fn if sym_kind == "fun" else t.name)
    raise UnknownSymbol(f"symbol {label} belongs to neither theory")


def _term_owner(t: Term, sig1: Signature, sig2: Signature) -> Optional[int]:
    if isinstance(t, Var):
        return None
    return _owner("const" if isinstance(t, Const) else "fun", t, sig1, sig2)


def purify(
    lits: Iterable[Lit],
    sig1: Signature,
    sig2: Signature,
    avoid: Iterable[str] = (),
) -> PurifiedProblem:
    """Abstract alien subterms bottom-up with fresh variables ``p#k``.

    A literal goes to the side owning its top symbol; equalities between
    variables go to side 2 only when their sort is not a side-1 sort.
    """
    clash = sig1.symbols() & sig2.symbols()
    if clash:
        raise NonDisjointSignatures(f"shared symbols {sorted(clash)}")
    lits = list(lits)
    names = set(avoid) | {v.name for v in free_vars(lits)}
    sides: dict[int, list[Lit]] = {1: [], 2: []}
    origin: dict[Var, Term] = {}
    abstracted: dict[tuple[int, Term], Var] = {}

    def pure(t: Term, side: int) -> Term:
        """t rewritten so every symbol belongs to ``side``."""
        owner = _term_owner(t, sig1, sig2)
        if owner is not None and owner != side:
            key = (owner, t)
            if key not in abstracted:
                inner = pure(t, owner)
                v = fresh_var("p", t.sort, names)
                names.add(v.name)
                abstracted[key] = v
                origin[v] = t
                sides[owner].append(Lit(Eq(v, inner), True))
            return abstracted[key]
        if isinstance(t, App):
            return App(t.fn, tuple(pure(a, side) for a in t.args), t.sort)
        return t

    for l in lits:
        a = l.atom
        if l.is_true or l.is_false:
            sides[1].append(l)
            continue
        if isinstance(a, Eq):
            owners = [o for o in (_term_owner(t, sig1, sig2) for t in a.terms) if o is not None]
            if owners:
                side = owners[0]
            else:
                side = 1 if a.sort in sig1.sorts or a.sort not in sig2.sorts else 2
            sides[side].append(Lit(Eq(pure(a.lhs, side), pure(a.rhs, side)), l.positive))
        else:
            side = _owner("pred", a, sig1, sig2)
            sides[side].append(Lit(Pred(a.name, tuple(pure(t, side) for t in a.args)), l.positive))
    return PurifiedProblem(tuple(sides[1]), tuple(sides[2]), sig1.sorts & sig2.sorts, origin)


# --- modes --------------------------------------------------------------------


def _names(sorts: Iterable[Sort]) -> str:
    return "{" + ",".join(sorted(s.name for s in sorts)) + "}"


def variable_set(
    mode: Mode,
    gamma1: Sequence[Lit],
    wit_gamma2: Formula | Sequence[Lit],
    shared_sorts: Iterable[Sort],
) -> SortedVarSet:
    """The arrangement variables of ``mode`` (``wit_gamma2`` is plain Gamma2 for Nelson-Oppen)."""
    shared = frozenset(shared_sorts)
    out: dict[Sort, frozenset[Var]] = {}
    for s in shared:
        fv1 = free_vars(gamma1, s)
        fv2 = free_vars(wit_gamma2, s)
        if mode.kind == NELSON_OPPEN:
            out[s] = fv1 & fv2
        elif mode.kind == POLITE or s not in mode.si_sorts:
            out[s] = fv2
        else:
            out[s] = fv1 & fv2
    return SortedVarSet.from_mapping(out)


def check_mode_applicability(t1: TheorySpec, t2: TheorySpec, mode: Mode, shared_sorts: Iterable[Sort]) -> None:
    """Raise :class:`HypothesisViolation` naming the first missing declared property."""
    S = frozenset(shared_sorts)

    def need(ok: bool, what: str) -> None:
        if not ok:
            raise HypothesisViolation(f"{mode}: {what}")

    if mode.kind == NELSON_OPPEN:
        need(t1.is_stably_infinite(S), f"{t1} is not stably infinite on {_names(S)}")
        need(t2.is_stably_infinite(S), f"{t2} is not stably infinite on {_names(S)}")
        return
    if mode.kind == POLITE:
        need(t2.witness is not None, f"{t2} has no witness function")
        need(t2.has_strong_witness(S), f"witness strength of {t2} is {t2.witness.strength}, not strong on {_names(S)}")
        need(t2.is_smooth(S), f"{t2} is not smooth on {_names(S)}")
        return
    si = mode.si_sorts
    nsi = mode.nsi_sorts(S)
    need(si <= S, f"si-sorts {_names(si - S)} are not shared")
    need(t1.is_stably_infinite(si), f"{t1} is not stably infinite on {_names(si)}")
    strong_on_nsi = not nsi or t2.has_strong_witness(nsi)
    if mode.kind == OPTIMIZED:
        need(t2.witness is not None, f"{t2} has no witness function")
        need(t2.has_strong_witness(S), f"witness strength of {t2} is {t2.witness.strength}, not strong on {_names(S)}")
        need(t2.is_smooth(S), f"{t2} is not smooth on {_names(S)}")
        return
    need(not nsi or t2.witness is not None, f"{t2} has no witness function")
    if mode.case == 1:
        need(t2.has_two_set(STRONGLY_SI, si, nsi), f"{t2} is not strongly stably infinite w.r.t. ({_names(si)}, {_names(nsi)})")
        need(t2.is_smooth(nsi), f"{t2} is not smooth on {_names(nsi)}")
        need(strong_on_nsi, f"{t2} has no strong witness on {_names(nsi)}")
    elif mode.case == 2:
        need(t2.has_two_set(SI_TWO, si, nsi), f"{t2} is not stably infinite w.r.t. ({_names(si)}, {_names(nsi)})")
        need(t2.has_two_set(SMOOTH_TWO, nsi, si), f"{t2} is not smooth w.r.t. ({_names(nsi)}, {_names(si)})")
        need(strong_on_nsi, f"{t2} has no strong witness on {_names(nsi)}")
    else:
        need(t2.is_stably_infinite(si), f"{t2} is not stably infinite on {_names(si)}")
        need(t2.has_two_set(SMOOTH_TWO, nsi, si), f"{t2} is not smooth w.r.t. ({_names(nsi)}, {_names(si)})")
        need(t2.has_two_set(STRONGLY_FW, nsi, si), f"{t2} is not strongly finitely witnessable w.r.t. ({_names(nsi)}, {_names(si)})")


# --- the combination loop -------------------------------------------------------


@dataclass(frozen=True)
class CombinationOutcome:
    verdict: str
    witnessed_gamma2: Formula
    variable_set: SortedVarSet
    arrangements_examined: int
    arrangements_total: int
    satisfying_arrangement: Optional[Arrangement] = None
    models: Optional[tuple[Optional[FiniteInterpretation], Optional[FiniteInterpretation]]] = None
    approximate: bool = False
    mode: Optional[Mode] = None
    violation: Optional[str] = None

    @property
    def is_sat(self) -> bool:
        return self.verdict == SAT


def _check_arrangement(a: Arrangement, gamma1, cubes2, t1: TheorySpec, t2: TheorySpec):
    delta = arrangement_to_formula(a)
    r1 = t1.decide(tuple(gamma1) + delta)
    if not r1:
        return None
    for cube in cubes2:
        r2 = t2.decide(tuple(cube) + delta)
        if r2:
            return r1, r2
    return None


def combine(
    problem: PurifiedProblem,
    t1: TheorySpec,
    t2: TheorySpec,
    mode: Mode,
    override: bool = False,
    workers: Optional[int] = None,
) -> CombinationOutcome:
    """Decide ``gamma1 and gamma2`` in the combined theory.

    With ``override`` a failed hypothesis check is recorded in the outcome
    instead of raised.  ``workers > 1`` checks arrangements on a thread pool;
    the examined count is then a lower bound and flagged approximate.
    """
    S = problem.shared_sorts
    violation = None
    try:
        check_mode_applicability(t1, t2, mode, S)
    except HypothesisViolation as e:
        if not override:
            raise
        violation = str(e)
    gamma2 = conj(*problem.gamma2)
    if mode.kind == NELSON_OPPEN or t2.witness is None:
        witnessed = gamma2
    else:
        avoid = {v.name for v in problem.variables()}
        witnessed = t2.witness(gamma2, avoid)
    cubes2 = to_dnf(witnessed, get_cap("dnf_cubes"))
    V = variable_set(mode, problem.gamma1, witnessed, S)
    total = count_arrangements(V)
    found = None
    examined = 0
    approximate = bool(workers and workers > 1)
    arrangements = enumerate_arrangements(V)
    if approximate:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [(a, pool.submit(_check_arrangement, a, problem.gamma1, cubes2, t1, t2)) for a in arrangements]
            for a, fut in futures:
                examined += 1
                res = fut.result()
                if res is not None:
                    found = (a, res)
                    break
            for _, fut in futures:
                fut.cancel()
    else:
        for a in arrangements:
            examined += 1
            res = _check_arrangement(a, problem.gamma1, cubes2, t1, t2)
            if res is not None:
                found = (a, res)
                break
    if found is None:
        return CombinationOutcome(UNSAT_VERDICT, witnessed, V, examined, total, None, None, approximate, mode, violation)
    a, (r1, r2) = found
    return CombinationOutcome(SAT, witnessed, V, examined, total, a, (r1.model, r2.model), approximate, mode, violation)


# --- cardinality emptiness --------------------------------------------------------

EMPTY = "empty"
NONEMPTY = "nonempty"
UNKNOWN = "unknown"


def combined_cardinality_emptiness(t1: TheorySpec, t2: TheorySpec, K: Optional[int] = None) -> str:
    """Whether any cardinality map over {1..K, Infinite} is accepted by both theories."""
    if t1.accepts is None or t2.accepts is None:
        return UNKNOWN
    K = get_cap("grid_k") if K is None else K
    sorts = sorted(t1.sorts | t2.sorts)
    values = list(range(1, K + 1)) + [INFINITE]
    for combo in itertools.product(values, repeat=len(sorts)):
        m = dict(zip(sorts, combo))
        if t1.accepts({s: m[s] for s in t1.sorts}) and t2.accepts({s: m[s] for s in t2.sorts}):
            return NONEMPTY
    monotone = t1.threshold_monotone and t2.threshold_monotone and max(t1.threshold, t2.threshold) <= K
    return EMPTY if monotone else UNKNOWN


# --- composite theories --------------------------------------------------------------


def _merge_models(m1: Optional[FiniteInterpretation], m2: Optional[FiniteInterpretation]) -> Optional[FiniteInterpretation]:
    if m1 is None or m2 is None:
        return None
    return FiniteInterpretation(
        {**m1.domains, **m2.domains},
        {**m1.assignment, **m2.assignment},
        {**m1.functions, **m2.functions},
        {**m1.predicates, **m2.predicates},
    )


def compose_theories(ta: TheorySpec, tb: TheorySpec) -> TheorySpec:
    """The combination of two signature-disjoint theories as a single theory.

    Without shared sorts a conjunction splits into independent halves.  With
    shared sorts both components must be stably infinite on them and the
    composite runs Nelson-Oppen internally (no model is returned then).
    """
    sig = ta.signature.union(tb.signature)
    shared = ta.sorts & tb.sorts
    if shared and not (ta.is_stably_infinite(shared) and tb.is_stably_infinite(shared)):
        raise HypothesisViolation(f"cannot compose {ta} and {tb}: not stably infinite on shared sorts {_names(shared)}")

    def decide(lits: Sequence[Lit]) -> SatResult:
        prob = purify(lits, ta.signature, tb.signature)
        if not shared:
            r1 = ta.decide(prob.gamma1)
            if not r1:
                return UNSAT
            r2 = tb.decide(prob.gamma2)
            if not r2:
                return UNSAT
            model = _merge_models(r1.model, r2.model)
            return checked_sat(lits, model) if model is not None else SatResult(True)
        out = combine(prob, ta, tb, nelson_oppen())
        return SatResult(True) if out.is_sat else UNSAT

    def per_sort(prop: str) -> frozenset[Sort]:
        out = set()
        for s in sig.sorts:
            owners = [t for t in (ta, tb) if s in t.sorts]
            if all(s in getattr(t, prop) for t in owners):
                out.add(s)
        return frozenset(out)

    return TheorySpec(
        name=f"{ta.name}+{tb.name}",
        signature=sig,
        decide=decide,
        stably_infinite_sorts=per_sort("stably_infinite_sorts"),
        smooth_sorts=per_sort("smooth_sorts"),
        semantics=ta.semantics.merge(tb.semantics),
        components=(ta, tb),
    )
