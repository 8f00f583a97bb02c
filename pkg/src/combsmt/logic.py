"""Many-sorted quantifier-free logic: terms, literals, formulas, finite interpretations.

All values are immutable.  Equality is built in at every sort and is never
declared in a :class:`Signature`.  The true-literal is the positive literal
over the distinguished 0-ary atom :data:`TRUE_ATOM`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Optional, Sequence, Union

from .caps import get_cap
from .errors import (
    ArityMismatch,
    CombError,
    DnfBlowup,
    MixedSorts,
    NonDisjointSignatures,
    SortMismatch,
    UnassignedVariable,
    UnknownSymbol,
)

FRESH_MARK = "#"


@dataclass(frozen=True, order=True)
class Sort:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class FunDecl:
    name: str
    args: tuple[Sort, ...]
    result: Sort


@dataclass(frozen=True)
class PredDecl:
    name: str
    args: tuple[Sort, ...]


@dataclass(frozen=True)
class Signature:
    """Sorts plus function and predicate symbols.

    ``value_sorts`` lists the sorts whose interpreted constants (numerals,
    bit-vector literals) may appear as :class:`Const` terms.
    """

    sorts: frozenset[Sort]
    functions: Mapping[str, FunDecl] = field(default_factory=dict)
    predicates: Mapping[str, PredDecl] = field(default_factory=dict)
    value_sorts: frozenset[Sort] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "sorts", frozenset(self.sorts))
        object.__setattr__(self, "value_sorts", frozenset(self.value_sorts))
        for decl in list(self.functions.values()) + list(self.predicates.values()):
            sorts = decl.args + ((decl.result,) if isinstance(decl, FunDecl) else ())
            for s in sorts:
                if s not in self.sorts:
                    raise UnknownSymbol(f"symbol {decl.name} mentions undeclared sort {s}")
        if "=" in self.predicates or "true" in self.predicates:
            raise CombError("equality and the true-atom are built in and cannot be declared")

    @property
    def is_empty(self) -> bool:
        return not self.functions and not self.predicates and not self.value_sorts

    def symbols(self) -> set[str]:
        return set(self.functions) | set(self.predicates)

    def union(self, other: "Signature") -> "Signature":
        clash = self.symbols() & other.symbols()
        if clash:
            raise NonDisjointSignatures(f"signatures share symbols {sorted(clash)}")
        return Signature(
            self.sorts | other.sorts,
            {**self.functions, **other.functions},
            {**self.predicates, **other.predicates},
            self.value_sorts | other.value_sorts,
        )


def empty_signature(*sort_names: str) -> Signature:
    return Signature(frozenset(Sort(n) for n in sort_names))


# --- terms -------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Var:
    name: str
    sort: Sort

    def __str__(self) -> str:
        return self.name


# Display hooks for interpreted constants, keyed by sort name.
CONST_FORMATS: dict[str, Callable[[Hashable], str]] = {}


@dataclass(frozen=True)
class Const:
    """An interpreted constant; its value doubles as its element id."""

    value: Hashable
    sort: Sort

    def __str__(self) -> str:
        fmt = CONST_FORMATS.get(self.sort.name)
        return fmt(self.value) if fmt else str(self.value)


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple["Term", ...]
    sort: Sort

    def __str__(self) -> str:
        if not self.args:
            return self.fn
        return "(" + " ".join([self.fn] + [str(a) for a in self.args]) + ")"


Term = Union[Var, Const, App]


def app(decl: FunDecl, *args: Term) -> App:
    return App(decl.name, tuple(args), decl.result)


def subterms(t: Term) -> Iterator[Term]:
    """Post-order traversal: arguments before the term itself."""
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)
    yield t


def term_vars(t: Term) -> Iterator[Var]:
    for s in subterms(t):
        if isinstance(s, Var):
            yield s


# --- literals and formulas ---------------------------------------------------


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term

    @property
    def sort(self) -> Sort:
        return self.lhs.sort

    @property
    def terms(self) -> tuple[Term, ...]:
        return (self.lhs, self.rhs)


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple[Term, ...] = ()

    @property
    def terms(self) -> tuple[Term, ...]:
        return self.args


Atom = Union[Eq, Pred]

TRUE_ATOM = Pred("true", ())


@dataclass(frozen=True)
class Lit:
    atom: Atom
    positive: bool = True

    def negate(self) -> "Lit":
        return Lit(self.atom, not self.positive)

    @property
    def is_true(self) -> bool:
        return self.atom == TRUE_ATOM and self.positive

    @property
    def is_false(self) -> bool:
        return self.atom == TRUE_ATOM and not self.positive

    def __str__(self) -> str:
        a = self.atom
        if a == TRUE_ATOM:
            return "true" if self.positive else "false"
        if isinstance(a, Eq):
            return f"({'=' if self.positive else 'distinct'} {a.lhs} {a.rhs})"
        inner = "(" + " ".join([a.name] + [str(t) for t in a.args]) + ")"
        return inner if self.positive else f"(not {inner})"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]

    def __str__(self) -> str:
        return "(and " + " ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]

    def __str__(self) -> str:
        return "(or " + " ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self) -> str:
        return f"(not {self.arg})"


Formula = Union[Lit, And, Or, Not]

TRUE = Lit(TRUE_ATOM, True)
FALSE = Lit(TRUE_ATOM, False)


def eq(a: Term, b: Term) -> Lit:
    return Lit(Eq(a, b), True)


def neq(a: Term, b: Term) -> Lit:
    return Lit(Eq(a, b), False)


def pred(name: str, *args: Term, positive: bool = True) -> Lit:
    return Lit(Pred(name, tuple(args)), positive)


def conj(*parts: Formula) -> Formula:
    """Flattening conjunction that drops true-literals; () gives TRUE."""
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, And):
            flat.extend(a for a in p.args if a != TRUE)
        elif p != TRUE:
            flat.append(p)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    """Flattening disjunction; an empty disjunction is false."""
    flat: list[Formula] = []
    for p in parts:
        flat.extend(p.args if isinstance(p, Or) else (p,))
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def literals_of(formula: Formula) -> Iterator[Lit]:
    if isinstance(formula, Lit):
        yield formula
    elif isinstance(formula, Not):
        yield from literals_of(formula.arg)
    else:
        for a in formula.args:
            yield from literals_of(a)


def as_literals(formula: Formula) -> tuple[Lit, ...]:
    """The literals of a conjunction of literals; raises on anything else."""
    if isinstance(formula, Lit):
        return () if formula.is_true else (formula,)
    if isinstance(formula, And) and all(isinstance(a, Lit) for a in formula.args):
        return tuple(a for a in formula.args if not a.is_true)
    raise CombError(f"not a conjunction of literals: {formula}")


def formula_terms(formula: Formula) -> Iterator[Term]:
    for lit in literals_of(formula):
        yield from lit.atom.terms


def free_vars(formula: Union[Formula, Iterable[Lit]], sort: Optional[Sort] = None) -> frozenset[Var]:
    """fv(formula), or only the variables of ``sort`` when given."""
    lits = literals_of(formula) if isinstance(formula, (Lit, And, Or, Not)) else formula
    found = set()
    for lit in lits:
        for t in lit.atom.terms:
            found.update(term_vars(t))
    if sort is not None:
        return frozenset(v for v in found if v.sort == sort)
    return frozenset(found)


def fresh_var(base: str, sort: Sort, avoid: Iterable[str]) -> Var:
    """A variable ``base#k`` whose name is not in ``avoid``."""
    taken = set(avoid)
    for k in itertools.count(1):
        name = f"{base}{FRESH_MARK}{k}"
        if name not in taken:
            return Var(name, sort)
    raise AssertionError("unreachable")


def fresh_vars(bases: Sequence[tuple[str, Sort]], avoid: Iterable[str]) -> list[Var]:
    taken = set(avoid)
    out = []
    for base, sort in bases:
        v = fresh_var(base, sort, taken)
        taken.add(v.name)
        out.append(v)
    return out


# --- sort checking -----------------------------------------------------------


def _check_term(t: Term, sig: Signature, used: set[Sort]) -> None:
    if isinstance(t, Var):
        if t.sort not in sig.sorts:
            raise UnknownSymbol(f"variable {t.name} has undeclared sort {t.sort}")
    elif isinstance(t, Const):
        if t.sort not in sig.value_sorts:
            raise UnknownSymbol(f"constant {t} of sort {t.sort} is not in the signature")
    else:
        decl = sig.functions.get(t.fn)
        if decl is None:
            raise UnknownSymbol(f"unknown function symbol {t.fn} in {t}")
        if len(decl.args) != len(t.args):
            raise ArityMismatch(f"{t.fn} expects {len(decl.args)} arguments, got {len(t.args)} in {t}")
        for a, expected in zip(t.args, decl.args):
            _check_term(a, sig, used)
            if a.sort != expected:
                raise SortMismatch(f"argument {a} of {t.fn} has sort {a.sort}, expected {expected} in {t}")
        if t.sort != decl.result:
            raise SortMismatch(f"{t} is tagged {t.sort} but {t.fn} returns {decl.result}")
    used.add(t.sort)


def sort_check(formula: Formula, sig: Signature) -> frozenset[Sort]:
    """Check well-sortedness against ``sig``; returns the sorts used."""
    used: set[Sort] = set()
    for lit in literals_of(formula):
        a = lit.atom
        if isinstance(a, Eq):
            _check_term(a.lhs, sig, used)
            _check_term(a.rhs, sig, used)
            if a.lhs.sort != a.rhs.sort:
                raise SortMismatch(f"equality between {a.lhs}:{a.lhs.sort} and {a.rhs}:{a.rhs.sort}")
        elif a != TRUE_ATOM:
            decl = sig.predicates.get(a.name)
            if decl is None:
                raise UnknownSymbol(f"unknown predicate symbol {a.name}")
            if len(decl.args) != len(a.args):
                raise ArityMismatch(f"{a.name} expects {len(decl.args)} arguments, got {len(a.args)}")
            for t, expected in zip(a.args, decl.args):
                _check_term(t, sig, used)
                if t.sort != expected:
                    raise SortMismatch(f"argument {t} of {a.name} has sort {t.sort}, expected {expected}")
    return frozenset(used)


# --- cardinalities -----------------------------------------------------------

Cardinality = Union[int, float]
INFINITE: float = math.inf


def finite(n: int) -> int:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"finite cardinality must be a positive integer, got {n!r}")
    return n


def is_infinite(c: Cardinality) -> bool:
    return c == INFINITE


def card_str(c: Cardinality) -> str:
    return "inf" if is_infinite(c) else str(c)


# --- finite interpretations --------------------------------------------------

FunctionInterp = Union[Mapping[tuple, Hashable], Callable[..., Hashable]]
PredicateInterp = Union[frozenset, Callable[..., bool]]


@dataclass(frozen=True)
class FiniteInterpretation:
    """Explicit finite domains, a variable assignment and symbol interpretations.

    Functions are either total tables (mappings from argument tuples) or
    callables for interpreted symbols whose element ids are their values.
    When ``signature`` is given, tables are checked for totality.
    """

    domains: Mapping[Sort, tuple]
    assignment: Mapping[Var, Hashable]
    functions: Mapping[str, FunctionInterp] = field(default_factory=dict)
    predicates: Mapping[str, PredicateInterp] = field(default_factory=dict)
    signature: Optional[Signature] = None

    def __post_init__(self):
        for s, dom in self.domains.items():
            if not dom:
                raise CombError(f"domain of {s} is empty")
            if len(set(dom)) != len(dom):
                raise CombError(f"domain of {s} has repeated elements")
        doms = {s: set(d) for s, d in self.domains.items()}
        for v, e in self.assignment.items():
            if v.sort not in doms or e not in doms[v.sort]:
                raise CombError(f"{v.name} is assigned {e!r}, outside the domain of {v.sort}")
        if self.signature is not None:
            for name, table in self.functions.items():
                decl = self.signature.functions.get(name)
                if decl is None or callable(table):
                    continue
                for args in itertools.product(*(self.domains[s] for s in decl.args)):
                    if args not in table:
                        raise CombError(f"table for {name} is undefined at {args}")

    def size(self, sort: Sort) -> int:
        return len(self.domains[sort])

    def sizes(self) -> dict[Sort, int]:
        return {s: len(d) for s, d in self.domains.items()}

    def value(self, t: Term) -> Hashable:
        if isinstance(t, Var):
            try:
                return self.assignment[t]
            except KeyError:
                raise UnassignedVariable(f"variable {t.name} is not assigned") from None
        if isinstance(t, Const):
            return t.value
        args = tuple(self.value(a) for a in t.args)
        interp = self.functions.get(t.fn)
        if interp is None:
            raise UnknownSymbol(f"function {t.fn} has no interpretation")
        if callable(interp):
            return interp(*args)
        try:
            return interp[args]
        except KeyError:
            raise CombError(f"{t.fn} is undefined at {args}") from None

    def holds(self, atom: Atom) -> bool:
        if atom == TRUE_ATOM:
            return True
        if isinstance(atom, Eq):
            return self.value(atom.lhs) == self.value(atom.rhs)
        args = tuple(self.value(a) for a in atom.args)
        interp = self.predicates.get(atom.name)
        if interp is None:
            raise UnknownSymbol(f"predicate {atom.name} has no interpretation")
        return interp(*args) if callable(interp) else args in interp

    def image(self, variables: Iterable[Var]) -> set:
        return {self.value(v) for v in variables}

    def with_assignment(self, extra: Mapping[Var, Hashable]) -> "FiniteInterpretation":
        return FiniteInterpretation(
            self.domains, {**self.assignment, **extra}, self.functions, self.predicates, self.signature
        )


def evaluate(interp: FiniteInterpretation, formula: Formula) -> bool:
    """Standard satisfaction; equality is identity of element ids."""
    if isinstance(formula, Lit):
        return interp.holds(formula.atom) == formula.positive
    if isinstance(formula, And):
        return all(evaluate(interp, a) for a in formula.args)
    if isinstance(formula, Or):
        return any(evaluate(interp, a) for a in formula.args)
    return not evaluate(interp, formula.arg)


def satisfies_all(interp: FiniteInterpretation, lits: Iterable[Lit]) -> bool:
    return all(interp.holds(l.atom) == l.positive for l in lits)


# --- builders ----------------------------------------------------------------


def build_distinct(variables: Sequence[Var]) -> Formula:
    """Pairwise disequality of ``variables``; a single variable gives TRUE."""
    if not variables:
        raise ValueError("build_distinct needs at least one variable")
    sorts = {v.sort for v in variables}
    if len(sorts) > 1:
        raise MixedSorts(f"distinct over mixed sorts {sorted(s.name for s in sorts)}")
    return conj(*(neq(a, b) for a, b in itertools.combinations(variables, 2)))


def cardinality_check(interp: FiniteInterpretation, sort: Sort, kind: str, n: int) -> bool:
    """Compare |sort^A| with n; ``kind`` is at_least, at_most or exactly."""
    size = interp.size(sort)
    if kind == "at_least":
        return size >= n
    if kind == "at_most":
        return size <= n
    if kind == "exactly":
        return size == n
    raise ValueError(f"unknown cardinality constraint {kind!r}")


# --- DNF ---------------------------------------------------------------------


def nnf(formula: Formula, positive: bool = True) -> Formula:
    if isinstance(formula, Lit):
        return formula if positive else formula.negate()
    if isinstance(formula, Not):
        return nnf(formula.arg, not positive)
    parts = tuple(nnf(a, positive) for a in formula.args)
    if isinstance(formula, And):
        return And(parts) if positive else Or(parts)
    return Or(parts) if positive else And(parts)


def to_dnf(formula: Formula, cap: Optional[int] = None) -> list[tuple[Lit, ...]]:
    """Disjunction of literal conjunctions equivalent to ``formula``.

    Cubes containing the false-literal are dropped; an unsatisfiable-by-shape
    formula such as an empty disjunction gives ``[]``.
    """
    limit = get_cap("dnf_cubes") if cap is None else cap

    def go(f: Formula) -> list[tuple[Lit, ...]]:
        if isinstance(f, Lit):
            return [] if f.is_false else [(f,)]
        if isinstance(f, Or):
            out: list[tuple[Lit, ...]] = []
            for a in f.args:
                out.extend(go(a))
                if len(out) > limit:
                    raise DnfBlowup(f"DNF exceeds {limit} cubes")
            return out
        acc: list[tuple[Lit, ...]] = [()]
        for a in f.args:
            sub = go(a)
            if len(acc) * len(sub) > limit:
                raise DnfBlowup(f"DNF exceeds {limit} cubes")
            acc = [c + d for c in acc for d in sub]
        return acc

    return go(nnf(formula))
