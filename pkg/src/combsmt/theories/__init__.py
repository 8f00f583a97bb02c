"""The theory roster, addressed by stable string names.

Names: ``t_atleast:<n>[@sort]``, ``t23``, ``t11``, ``t_even_inf[@sort]``,
``euf``, ``int_frag``, ``bv4``, ``list_pair[:elem1,elem2]``.  Joining names
with ``+`` builds a composite theory (``int_frag+bv4``).
"""

from __future__ import annotations

from typing import Optional

from ..errors import UnknownTheory
from ..logic import Signature, Sort
from .base import (
    PLAIN,
    SI_TWO,
    SMOOTH_TWO,
    STRONG,
    STRONGLY_FW,
    STRONGLY_SI,
    SatResult,
    Semantics,
    TheorySpec,
    UNSAT,
    Universe,
    UniverseHints,
    Witness,
)
from .bv4 import BV4, bv, bv4, decide_bv4
from .cardinality import (
    DEFAULT_SORT,
    SIGMA1,
    SIGMA2,
    decide_cardinality_theory,
    min_model_sizes,
    t0,
    t11,
    t23,
    t_atleast,
    t_even_inf,
)
from .euf import decide_euf, euf
from .intfrag import INT, decide_int_fragment, int_frag
from .lists import LIST, cons, decide_list_fragment, list_pair, nil, wit_list
from .witnesses import wit_even, wit_identity, wit_mono_distinct, wit_t0_plain, wit_t0_strong, wit_t23

__all__ = [
    "BV4",
    "DEFAULT_SORT",
    "INT",
    "LIST",
    "PLAIN",
    "ROSTER_NAMES",
    "SIGMA1",
    "SIGMA2",
    "SI_TWO",
    "SMOOTH_TWO",
    "STRONG",
    "STRONGLY_FW",
    "STRONGLY_SI",
    "SatResult",
    "Semantics",
    "Signature",
    "Sort",
    "TheorySpec",
    "UNSAT",
    "Universe",
    "UniverseHints",
    "UnknownTheory",
    "Witness",
    "bv",
    "bv4",
    "cons",
    "decide_bv4",
    "decide_cardinality_theory",
    "decide_euf",
    "decide_int_fragment",
    "decide_list_fragment",
    "euf",
    "get_theory",
    "int_frag",
    "list_pair",
    "min_model_sizes",
    "nil",
    "t0",
    "t11",
    "t23",
    "t_atleast",
    "t_even_inf",
    "wit_even",
    "wit_identity",
    "wit_list",
    "wit_mono_distinct",
    "wit_t0_plain",
    "wit_t0_strong",
    "wit_t23",
]

ROSTER_NAMES = ("t_atleast:<n>", "t23", "t11", "t_even_inf", "euf", "int_frag", "bv4", "list_pair")


def _split_sort(name: str) -> tuple[str, Optional[Sort]]:
    base, _, sort = name.partition("@")
    return base, (Sort(sort) if sort else None)


def _single(name: str, signature: Optional[Signature]) -> TheorySpec:
    base, sort = _split_sort(name)
    if base.startswith("t_atleast:"):
        try:
            n = int(base.split(":", 1)[1])
        except ValueError:
            raise UnknownTheory(f"bad cardinality bound in {name!r}") from None
        return t_atleast(n, sort or DEFAULT_SORT)
    if base == "t_even_inf":
        return t_even_inf(sort or DEFAULT_SORT)
    if sort is not None:
        raise UnknownTheory(f"theory {base!r} takes no @sort suffix")
    if base == "t23":
        return t23()
    if base == "t11":
        return t11()
    if base == "int_frag":
        return int_frag()
    if base == "bv4":
        return bv4()
    if base == "euf":
        if signature is None:
            raise UnknownTheory("euf needs a signature of declared functions")
        return euf(signature)
    if base == "list_pair":
        return list_pair()
    if base.startswith("list_pair:"):
        elems = base.split(":", 1)[1].split(",")
        if len(elems) != 2 or not all(elems):
            raise UnknownTheory(f"list_pair needs two element sorts, got {name!r}")
        return list_pair(Sort(elems[0]), Sort(elems[1]))
    raise UnknownTheory(f"unknown theory {name!r}; known: {', '.join(ROSTER_NAMES)}")


def get_theory(name: str, signature: Optional[Signature] = None) -> TheorySpec:
    """Resolve a roster name; ``signature`` supplies the symbols of ``euf``."""
    parts = [p.strip() for p in name.split("+")]
    if not all(parts):
        raise UnknownTheory(f"malformed theory name {name!r}")
    theories = [_single(p, signature) for p in parts]
    if len(theories) == 1:
        return theories[0]
    from ..combiner import compose_theories

    out = theories[0]
    for t in theories[1:]:
        out = compose_theories(out, t)
    return out
