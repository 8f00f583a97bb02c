"""Brute-force finite-model search and bounded property checkers.

Everything here is deliberately naive: it is the ground truth the combiner
and the theory deciders are tested against.  Cardinality theories get exact
answers through their acceptance predicates; other theories get answers
qualified by the search bounds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .arrangements import (
    Arrangement,
    SortedVarSet,
    arrangement_to_formula,
    enumerate_arrangements,
    restricted_growth_strings,
)
from .caps import get_cap
from .combiner import EMPTY, combined_cardinality_emptiness
from .errors import CapExceeded, CombError, NonEmptySignature
from .logic import (
    INFINITE,
    App,
    Cardinality,
    Const,
    Eq,
    FiniteInterpretation,
    Formula,
    Lit,
    Signature,
    Sort,
    Term,
    Var,
    card_str,
    conj,
    evaluate,
    free_vars,
    fresh_vars,
    is_infinite,
    satisfies_all,
    subterms,
    to_dnf,
)
from .theories.base import TheorySpec, UniverseHints
from .theories.cardinality import coloring

HOLDS = "holds-at-bounds"
REFUTED = "refuted"
UNKNOWN = "unknown"

SAT = "sat"
UNSAT_AT_BOUNDS = "unsat-at-bounds"
UNSAT_ANALYTIC = "unsat-analytic"


@dataclass(frozen=True)
class SearchBounds:
    """Per-sort maximum domain sizes (``default`` for unlisted sorts) and a model cap."""

    default: int = 4
    per_sort: Mapping[Sort, int] = field(default_factory=dict)
    model_cap: Optional[int] = None

    def __post_init__(self):
        if self.default < 1 or any(n < 1 for n in self.per_sort.values()):
            raise ValueError("search bounds must be at least 1")

    def size(self, sort: Sort) -> int:
        return self.per_sort.get(sort, self.default)

    @property
    def cap(self) -> int:
        return get_cap("model_cap") if self.model_cap is None else self.model_cap


@dataclass(frozen=True)
class Counterexample:
    formula: Formula
    arrangement: Arrangement
    interpretation: Optional[FiniteInterpretation] = None


@dataclass(frozen=True)
class PropertyReport:
    verdict: str
    counterexample: Optional[Counterexample] = None
    conclusive: bool = False
    bounds: Optional[SearchBounds] = None
    detail: str = ""

    @property
    def refuted(self) -> bool:
        return self.verdict == REFUTED


# --- bounded model enumeration ------------------------------------------------------


def _formula_sorts(phi: Formula, sig: Signature) -> list[Sort]:
    sorts = set(sig.sorts) | {v.sort for v in free_vars(phi)}
    return sorted(sorts)


def _canonical_assignments(variables: Sequence[Var], size: int) -> Iterator[tuple[int, ...]]:
    """Restricted-growth assignments into range(size): one per image pattern."""
    for rgs in restricted_growth_strings(len(variables)):
        if max(rgs, default=-1) < size:
            yield rgs


def bounded_models(phi: Formula, sig: Signature, bounds: SearchBounds = SearchBounds()) -> Iterator[FiniteInterpretation]:
    """Satisfying structures with domains within ``bounds``, smallest sizes first.

    Variables are assigned canonically per sort (element 0 first, a new
    element only after all smaller ones), which enumerates structures up to
    renaming of elements.  Function and predicate tables are enumerated in
    full, so only tiny signatures are practical; the number of candidate
    structures is capped.
    """
    if sig.value_sorts:
        raise NonEmptySignature("bounded_models does not enumerate interpreted sorts")
    sorts = _formula_sorts(phi, sig)
    fv = sorted(free_vars(phi))
    by_sort = {s: [v for v in fv if v.sort == s] for s in sorts}
    size_vectors = sorted(itertools.product(*(range(1, bounds.size(s) + 1) for s in sorts)), key=lambda t: (sum(t), t))
    funcs = sorted(sig.functions.values(), key=lambda d: d.name)
    preds = sorted(sig.predicates.values(), key=lambda d: d.name)
    budget = bounds.cap
    for sizes in size_vectors:
        domains = {s: tuple(range(n)) for s, n in zip(sorts, sizes)}
        per_sort = [list(_canonical_assignments(by_sort[s], domains[s].__len__())) for s in sorts]
        table_choices = []
        for d in funcs:
            keys = list(itertools.product(*(domains[a] for a in d.args)))
            table_choices.append([dict(zip(keys, vals)) for vals in itertools.product(domains[d.result], repeat=len(keys))])
        for d in preds:
            keys = list(itertools.product(*(domains[a] for a in d.args)))
            table_choices.append(
                [frozenset(k for k, bit in zip(keys, bits) if bit) for bits in itertools.product((0, 1), repeat=len(keys))]
            )
        for combo in itertools.product(*per_sort):
            assignment = {}
            for s, rgs in zip(sorts, combo):
                assignment.update(zip(by_sort[s], rgs))
            for tables in itertools.product(*table_choices):
                budget -= 1
                if budget < 0:
                    raise CapExceeded(f"bounded model search exceeded {bounds.cap} candidate structures")
                fns = {d.name: t for d, t in zip(funcs, tables)}
                prs = {d.name: t for d, t in zip(preds, tables[len(funcs):])}
                m = FiniteInterpretation(domains, assignment, fns, prs)
                if evaluate(m, phi):
                    yield m


# --- finite witnesses -------------------------------------------------------------------


def check_finite_witness(A: FiniteInterpretation, phi: Formula, S: Iterable[Sort]) -> bool:
    """A satisfies phi and each S-domain is exactly the image of phi's variables of that sort."""
    if not evaluate(A, phi):
        return False
    return all(set(A.domains[s]) == A.image(free_vars(phi, s)) for s in S)


def _member(theory: TheorySpec, sizes: Mapping[Sort, int], S: Iterable[Sort]) -> bool:
    """Finite structure membership; sorts outside S may be padded to infinity.

    Padding is sound only for the empty signature, which is the only case
    with an acceptance predicate.
    """
    m = {s: sizes.get(s, 1) for s in theory.sorts}
    if theory.accepts(m):
        return True
    free = [s for s in theory.sorts if s not in set(S)]
    for k in range(1, len(free) + 1):
        for grown in itertools.combinations(free, k):
            if theory.accepts({**m, **{s: INFINITE for s in grown}}):
                return True
    return False


def find_finite_witness(
    phi: Formula, theory: TheorySpec, S: Iterable[Sort], bounds: SearchBounds = SearchBounds()
) -> Optional[FiniteInterpretation]:
    """A member of ``theory`` finitely witnessing phi w.r.t. S, or None within bounds."""
    if theory.accepts is None:
        raise ValueError(f"{theory} has no cardinality predicate")
    S = frozenset(S)
    for A in bounded_models(phi, theory.signature, bounds):
        if _member(theory, A.sizes(), S) and check_finite_witness(A, phi, S):
            return A
    return None


def _witness_possible(cube: Sequence[Lit], theory: TheorySpec, S: frozenset[Sort], K: int) -> bool:
    """Analytic finite-witness test for an empty-signature cube fixing every S-class.

    With all S-variables arranged, a finite witness must have exactly as many
    S-elements as there are S-classes; other sorts may take any size at least
    their minimum.
    """
    res = coloring(cube, theory.sorts)
    if res is None:
        return False
    mins, colors = res
    counts = {s: len({c for v, c in colors.items() if v.sort == s}) for s in theory.sorts}
    if any(counts[s] == 0 for s in S):
        # an empty image cannot be a domain
        return False
    others = [s for s in sorted(theory.sorts) if s not in S]
    options = [list(range(mins[s], max(mins[s], K) + 1)) + [INFINITE] for s in others]
    for combo in itertools.product(*options):
        m = {s: counts[s] for s in theory.sorts if s in S}
        m.update(zip(others, combo))
        if theory.accepts(m):
            return True
    return False


def refute_strong_witness(
    wit,
    phi: Formula,
    theory: TheorySpec,
    extra_vars_bound: int = 0,
    bounds: SearchBounds = SearchBounds(),
    S: Optional[Iterable[Sort]] = None,
) -> PropertyReport:
    """Search for an arrangement under which wit(phi) is satisfiable but not finitely witnessed.

    Arrangements range over the S-variables of wit(phi) plus up to
    ``extra_vars_bound`` fresh variables per sort in S.  Satisfiability comes
    from the theory decider; the impossibility of a finite witness is decided
    analytically from class counts and cross-checked by bounded search.
    """
    if theory.accepts is None:
        raise ValueError(f"{theory} has no cardinality predicate")
    S = frozenset(S if S is not None else getattr(wit, "sorts", theory.sorts))
    out = wit(phi)
    K = get_cap("grid_k")
    base = [v for v in free_vars(out) if v.sort in S]
    names = {v.name for v in free_vars(out)}
    for k in range(extra_vars_bound + 1):
        extra = fresh_vars([("e", s) for s in sorted(S) for _ in range(k)], names)
        V = SortedVarSet(base + extra)
        for delta in enumerate_arrangements(V):
            dl = arrangement_to_formula(delta)
            formula = conj(out, *dl)
            cubes = to_dnf(formula)
            sat_cubes = [(c, r) for c in cubes for r in (theory.decide(c),) if r]
            if not sat_cubes:
                continue
            if any(_witness_possible(c, theory, S, K) for c, _ in sat_cubes):
                continue
            witness = find_finite_witness(formula, theory, S, bounds)
            if witness is not None:
                raise CombError(f"analytic and bounded witness checks disagree on {formula}")
            return PropertyReport(
                REFUTED,
                Counterexample(formula, delta, sat_cubes[0][1].model),
                conclusive=True,
                bounds=bounds,
                detail=f"satisfiable ({_profile_str(sat_cubes[0][1].profile)}) but no finite witness w.r.t. {_sorts_str(S)}",
            )
    return PropertyReport(HOLDS, bounds=bounds, detail=f"extra variables up to {extra_vars_bound}")


def _profile_str(profile) -> str:
    if not profile:
        return "no profile"
    return ", ".join(f"|{s}|={card_str(n)}" for s, n in sorted(profile.items()))


def _sorts_str(S) -> str:
    return "{" + ",".join(sorted(s.name for s in S)) + "}"


# --- smoothness -------------------------------------------------------------------------


def check_smoothness_spot(
    theory: TheorySpec,
    phi: Formula,
    A: FiniteInterpretation,
    targets: Mapping[Sort, Cardinality],
    S: Iterable[Sort],
    infinite_sorts: Iterable[Sort] = (),
) -> bool:
    """Whether a member satisfying phi exists with the S-domains at ``targets``.

    ``infinite_sorts`` marks sorts whose domain in A stands for an infinite
    one.  Finite growth pads the domains of A with fresh elements, which keeps
    phi true over the empty signature.
    """
    if not theory.signature.is_empty or theory.accepts is None:
        raise NonEmptySignature(f"smoothness spot-checks need an empty-signature theory, not {theory}")
    S = frozenset(S)
    infinite_sorts = frozenset(infinite_sorts)
    current = {s: (INFINITE if s in infinite_sorts else A.size(s)) if s in A.domains else 1 for s in theory.sorts}
    if not evaluate(A, phi) or not theory.accepts(current):
        raise ValueError("the given structure is not a member satisfying phi")
    for s in S:
        if targets[s] < current[s]:
            raise ValueError(f"target for {s} is below the current size")
    wanted = {**current, **{s: targets[s] for s in S}}
    if all(not is_infinite(c) for c in wanted.values()):
        padded = FiniteInterpretation(
            {s: tuple(range(wanted[s])) if s in wanted else d for s, d in A.domains.items()},
            A.assignment,
        )
        if not evaluate(padded, phi):
            return False
    return bool(theory.accepts(wanted))


# --- combined ground truth ----------------------------------------------------------------


@dataclass(frozen=True)
class OracleResult:
    verdict: str
    model: Optional[FiniteInterpretation] = None
    profile: Optional[Mapping[Sort, Cardinality]] = None

    @property
    def is_sat(self) -> bool:
        return self.verdict == SAT


def _trivially_false(l: Lit) -> bool:
    return l.is_false or (not l.positive and isinstance(l.atom, Eq) and l.atom.lhs == l.atom.rhs)


class _GroundSearch:
    """Backtracking over values of variables and uninterpreted applications.

    Interpreted symbols are evaluated; uninterpreted applications get a value
    consistent with every other application of the same symbol on the same
    arguments.  A positive equation whose other side is already computable
    defines its unassigned variable directly.
    """

    def __init__(self, lits, semantics, uninterpreted_sorts, candidates):
        self.lits = list(lits)
        self.sem = semantics
        self.free_sorts = uninterpreted_sorts
        self.candidates = candidates
        terms: list[Term] = []
        for l in self.lits:
            for t in l.atom.terms:
                for s in subterms(t):
                    if s not in terms:
                        terms.append(s)
        self.nodes = [t for t in terms if isinstance(t, Var) or (isinstance(t, App) and t.fn not in semantics.functions)]
        self.values: dict[Term, Hashable] = {}
        self.tables: dict[str, dict[tuple, Hashable]] = {}

    def value(self, t: Term):
        """Value of t, or None when some node below it is unassigned."""
        if t in self.values:
            return self.values[t]
        if isinstance(t, Const):
            return t.value
        if isinstance(t, Var):
            return None
        args = []
        for a in t.args:
            v = self.value(a)
            if v is None:
                return None
            args.append(v)
        if t.fn in self.sem.functions:
            return self.sem.functions[t.fn](*args)
        return self.tables.get(t.fn, {}).get(tuple(args))

    def ready(self, t: Term) -> bool:
        return isinstance(t, Var) or all(self.value(a) is not None for a in t.args)

    def consistent(self) -> bool:
        for l in self.lits:
            vals = [self.value(t) for t in l.atom.terms]
            if any(v is None for v in vals):
                continue
            if isinstance(l.atom, Eq):
                holds = vals[0] == vals[1]
            elif l.is_true:
                holds = True
            else:
                holds = bool(self.sem.predicates[l.atom.name](*vals))
            if holds != l.positive:
                return False
        return True

    def _choices(self, node: Term):
        if isinstance(node, App):
            args = tuple(self.value(a) for a in node.args)
            forced = self.tables.get(node.fn, {}).get(args)
            if forced is not None:
                return [forced]
        # a positive equation with a computable other side defines the node
        for l in self.lits:
            if l.positive and isinstance(l.atom, Eq):
                for a, b in (l.atom.terms, l.atom.terms[::-1]):
                    if a == node:
                        v = self.value(b)
                        if v is not None:
                            return [v]
        cands = self.candidates[node.sort]
        if node.sort in self.free_sorts:
            used = {v for t, v in self.values.items() if t.sort == node.sort}
            fresh = [c for c in cands if c not in used][:1]
            return sorted(used) + fresh
        return cands

    def _assign(self, node: Term, v) -> None:
        self.values[node] = v
        if isinstance(node, App):
            self.tables.setdefault(node.fn, {})[tuple(self.value(a) for a in node.args)] = v

    def _unassign(self, node: Term) -> None:
        del self.values[node]
        if isinstance(node, App):
            table = self.tables[node.fn]
            key = tuple(self.value(a) for a in node.args)
            if not any(t != node and isinstance(t, App) and t.fn == node.fn and tuple(self.value(a) for a in t.args) == key
                       for t in self.values):
                del table[key]

    def search(self) -> bool:
        pending = [n for n in self.nodes if n not in self.values and self.ready(n)]
        if not pending:
            return len(self.values) == len(self.nodes)
        # fewest choices first; ties keep term order
        options = [(len(c), i, n, c) for i, n in enumerate(pending) for c in (self._choices(n),)]
        _, _, node, choices = min(options, key=lambda o: o[:2])
        for v in choices:
            self._assign(node, v)
            if self.consistent() and self.search():
                return True
            self._unassign(node)
        return False


def _hints(lits: Sequence[Lit], candidates: Mapping[Sort, Sequence], list_length: int) -> UniverseHints:
    """Constants per sort, and the number of distinct non-constant terms per sort."""
    constants: dict[Sort, set] = {}
    terms: dict[Sort, set] = {}
    for l in lits:
        for t in l.atom.terms:
            for s in subterms(t):
                if isinstance(s, Const):
                    constants.setdefault(s.sort, set()).add(s.value)
                else:
                    terms.setdefault(s.sort, set()).add(s)
    counts = {s: len(ts) for s, ts in terms.items()}
    return UniverseHints({s: frozenset(c) for s, c in constants.items()}, counts, candidates, list_length)


def oracle_decide_combined(
    lits: Sequence[Lit],
    t1: TheorySpec,
    t2: TheorySpec,
    bounds: SearchBounds = SearchBounds(),
    list_length: int = 2,
    element_sample: int = 3,
) -> OracleResult:
    """Ground-truth satisfiability of a mixed conjunction in the combined theory.

    Uninterpreted sorts range over domains up to the bounds; interpreted sorts
    use their standard universes (truncated for enumeration, but computed
    values are never truncated).  Lists are enumerated up to ``list_length``
    over the first ``element_sample`` candidates of each element sort.
    """
    lits = list(lits)
    if any(_trivially_false(l) for l in lits):
        return OracleResult(UNSAT_ANALYTIC)
    if combined_cardinality_emptiness(t1, t2) == EMPTY:
        return OracleResult(UNSAT_ANALYTIC)
    sem = t1.semantics.merge(t2.semantics)
    sorts = sorted(t1.sorts | t2.sorts | {v.sort for v in free_vars(lits)})
    free_sorts = [s for s in sorts if s not in sem.universes]
    cardinal = [t for t in (t1, t2) if t.accepts is not None]
    # interpreted sorts whose universes depend on others come last
    interpreted = sorted((s for s in sorts if s in sem.universes), key=lambda s: (len(sem.universes[s].depends), s))

    def members(sizes: Mapping[Sort, Cardinality]) -> bool:
        return all(t.accepts({s: sizes[s] for s in t.sorts}) for t in cardinal)

    size_vectors = sorted(itertools.product(*(range(1, bounds.size(s) + 1) for s in free_sorts)), key=lambda t: (sum(t), t))
    for infinite_pass in (False, True):
        for sizes in size_vectors:
            finite_sizes = dict(zip(free_sorts, sizes))
            if not infinite_pass:
                profile = finite_sizes if members(finite_sizes) else None
            else:
                profile = None
                for k in range(1, len(free_sorts) + 1):
                    for grown in itertools.combinations(free_sorts, k):
                        m = {**finite_sizes, **{s: INFINITE for s in grown}}
                        if profile is None and members(m):
                            profile = m
            if profile is None:
                continue
            candidates: dict[Sort, Sequence] = {s: list(range(n)) for s, n in finite_sizes.items()}
            for s in interpreted:
                sample = {d: list(candidates[d])[:element_sample] for d in sem.universes[s].depends}
                hints = _hints(lits, {**candidates, **sample}, list_length)
                candidates[s] = list(sem.universes[s].values(hints))
            search = _GroundSearch(lits, sem, set(free_sorts), candidates)
            if search.search():
                model = _model_of(search, candidates, sem)
                if model is not None and not satisfies_all(model, lits):
                    raise CombError("oracle model does not satisfy its input")
                return OracleResult(SAT, model, profile)
    return OracleResult(UNSAT_AT_BOUNDS)


def _model_of(search: _GroundSearch, candidates, sem) -> Optional[FiniteInterpretation]:
    """The found assignment as a structure; uninterpreted functions default to the first element."""
    assignment = {t: v for t, v in search.values.items() if isinstance(t, Var)}
    domains = {}
    for s, c in candidates.items():
        values = set(c) | {v for t, v in search.values.items() if t.sort == s}
        domains[s] = tuple(sorted(values, key=repr))
    functions: dict = dict(sem.functions)
    for fn, table in search.tables.items():
        default = next(iter(table.values()))
        functions[fn] = (lambda tb, d: (lambda *args: tb.get(args, d)))(dict(table), default)
    for l in search.lits:
        for t in l.atom.terms:
            for s in subterms(t):
                if s.sort not in domains:
                    return None
    try:
        model = FiniteInterpretation(domains, assignment, functions, dict(sem.predicates))
    except CombError:
        return None
    return model
