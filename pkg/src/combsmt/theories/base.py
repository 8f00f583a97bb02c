"""Theory records: decision procedure, cardinality predicate and politeness metadata."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from ..errors import CombError
from ..logic import (
    Cardinality,
    FiniteInterpretation,
    Formula,
    Lit,
    Signature,
    Sort,
    free_vars,
    satisfies_all,
)

PLAIN = "plain"
STRONG = "strong"


@dataclass(frozen=True)
class SatResult:
    sat: bool
    model: Optional[FiniteInterpretation] = None
    profile: Optional[Mapping[Sort, int]] = None

    def __bool__(self) -> bool:
        return self.sat

    def __str__(self) -> str:
        return "sat" if self.sat else "unsat"


UNSAT = SatResult(False)


def checked_sat(lits: Sequence[Lit], model: Optional[FiniteInterpretation], profile=None) -> SatResult:
    """A Sat result whose model is re-checked against the input literals."""
    if model is not None and not satisfies_all(model, lits):
        raise CombError("internal error: decider model does not satisfy its input")
    return SatResult(True, model, profile)


def trivial_split(lits: Iterable[Lit]) -> Optional[list[Lit]]:
    """Drop true-literals; None when a false-literal is present."""
    out = []
    for l in lits:
        if l.is_false:
            return None
        if not l.is_true:
            out.append(l)
    return out


@dataclass(frozen=True)
class Witness:
    """A witness function together with its strength and the sorts it covers.

    ``fn(phi, avoid)`` must only introduce variables whose names are outside
    ``avoid`` and fv(phi); this is re-checked on every call.
    """

    fn: Callable[[Formula, frozenset], Formula]
    strength: str
    sorts: frozenset[Sort]
    name: str = "wit"
    budget: str = ""

    def __call__(self, phi: Formula, avoid: Iterable[str] = ()) -> Formula:
        avoid = frozenset(avoid) | {v.name for v in free_vars(phi)}
        out = self.fn(phi, avoid)
        before = free_vars(phi)
        after = free_vars(out)
        if not before <= after:
            raise CombError(f"witness {self.name} dropped variables {sorted(v.name for v in before - after)}")
        clash = {v.name for v in after - before} & avoid
        if clash:
            raise CombError(f"witness {self.name} reused names {sorted(clash)}")
        return out

    @property
    def is_strong(self) -> bool:
        return self.strength == STRONG


@dataclass(frozen=True)
class Universe:
    """Candidate element values of an interpreted sort for bounded model search."""

    values: Callable[["UniverseHints"], Sequence[Hashable]]
    depends: tuple[Sort, ...] = ()


@dataclass(frozen=True)
class UniverseHints:
    constants: Mapping[Sort, frozenset]
    term_counts: Mapping[Sort, int]  # distinct non-constant terms per sort
    candidates: Mapping[Sort, Sequence[Hashable]]
    list_length: int = 1


@dataclass(frozen=True)
class Semantics:
    """Standard-model meaning of interpreted symbols, used by the oracle."""

    universes: Mapping[Sort, Universe] = field(default_factory=dict)
    functions: Mapping[str, Callable[..., Hashable]] = field(default_factory=dict)
    predicates: Mapping[str, Callable[..., bool]] = field(default_factory=dict)

    def merge(self, other: "Semantics") -> "Semantics":
        return Semantics(
            {**self.universes, **other.universes},
            {**self.functions, **other.functions},
            {**self.predicates, **other.predicates},
        )


# Names of the two-set property variants a theory may declare.
STRONGLY_SI = "strongly_stably_infinite"
SI_TWO = "stably_infinite"
SMOOTH_TWO = "smooth"
STRONGLY_FW = "strongly_finitely_witnessable"
TWO_SET_FLAGS = (STRONGLY_SI, SI_TWO, SMOOTH_TWO, STRONGLY_FW)


@dataclass(frozen=True)
class TheorySpec:
    """A theory with its decider and declared (spot-checked, not proved) metadata.

    ``two_set`` maps a two-set property name to a sort universe U: the property
    is declared for every disjoint pair (S1, S2) with S1 and S2 inside U.  The
    standard implications are applied on top, see :meth:`has_two_set`.
    """

    name: str
    signature: Signature
    decide: Callable[[Sequence[Lit]], SatResult]
    accepts: Optional[Callable[[Mapping[Sort, Cardinality]], bool]] = None
    stably_infinite_sorts: frozenset[Sort] = frozenset()
    smooth_sorts: frozenset[Sort] = frozenset()
    witness: Optional[Witness] = None
    two_set: Mapping[str, frozenset] = field(default_factory=dict)
    threshold: int = 0
    threshold_monotone: bool = False
    semantics: Semantics = field(default_factory=Semantics)
    components: tuple["TheorySpec", ...] = ()

    def __hash__(self) -> int:
        return hash(self.name)

    def __eq__(self, other) -> bool:
        return isinstance(other, TheorySpec) and other.name == self.name

    def __str__(self) -> str:
        return self.name

    @property
    def sorts(self) -> frozenset[Sort]:
        return self.signature.sorts

    def is_stably_infinite(self, S: Iterable[Sort]) -> bool:
        return frozenset(S) <= self.stably_infinite_sorts

    def is_smooth(self, S: Iterable[Sort]) -> bool:
        return frozenset(S) <= self.smooth_sorts

    def has_strong_witness(self, S: Iterable[Sort]) -> bool:
        return self.witness is not None and self.witness.is_strong and frozenset(S) <= self.witness.sorts

    def is_strongly_polite(self, S: Iterable[Sort]) -> bool:
        return self.is_smooth(S) and self.has_strong_witness(S)

    def has_two_set(self, flag: str, S1: Iterable[Sort], S2: Iterable[Sort]) -> bool:
        """Whether the two-set property ``flag`` holds for (S1, S2)."""
        S1, S2 = frozenset(S1), frozenset(S2)
        if S1 & S2:
            raise ValueError("two-set properties need disjoint sort sets")
        if not S1:
            # with S1 empty every variant is witnessed by the given model itself
            return True
        declared = self.two_set.get(flag)
        if declared is not None and S1 | S2 <= declared:
            return True
        both = S1 | S2
        if flag == STRONGLY_SI:
            # smoothness on S1 u S2 yields it (infinite on S1, same sizes on S2)
            return self.is_smooth(both)
        if flag == SI_TWO:
            return self.has_two_set(STRONGLY_SI, S1, S2)
        if flag == SMOOTH_TWO:
            return self.is_smooth(both)
        if flag == STRONGLY_FW:
            return False
        raise ValueError(f"unknown two-set property {flag!r}")
