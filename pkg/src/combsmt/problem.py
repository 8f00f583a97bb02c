"""The ``.cmb`` problem format: a line-oriented file with s-expression literals.

::

    # comment
    sort int
    sort bv4
    sort list
    var x int
    var v bv4
    var a list
    fun f u u            # uninterpreted symbol for the euf theory
    side1 int_frag+bv4
    side2 list_pair
    lit1 (= x 5)
    lit2 (= a (cons x v nil))
    lit (= (f y) y)      # mixed literal, purified before solving
    mode optimized
    si-sorts int

Names containing ``#`` are reserved for generated variables and rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .combiner import (
    GENERAL,
    Mode,
    OPTIMIZED,
    PurifiedProblem,
    purify,
)
from .errors import CombError, ParseError, SortError, UnknownSymbol
from .logic import (
    FRESH_MARK,
    FALSE,
    TRUE,
    App,
    Const,
    Eq,
    FunDecl,
    Lit,
    Pred,
    Signature,
    Sort,
    Term,
    Var,
    sort_check,
)
from .theories import get_theory
from .theories.base import TheorySpec
from .theories.bv4 import BV4
from .theories.intfrag import INT

MODE_NAMES = ("nelson-oppen", "polite", "optimized", "general1", "general2", "general3")
KEYWORDS = ("sort", "var", "fun", "side1", "side2", "lit1", "lit2", "lit", "mode", "si-sorts")

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.'\-]*$")


@dataclass(frozen=True)
class ProblemFile:
    sorts: tuple[Sort, ...] = ()
    variables: tuple[Var, ...] = ()
    functions: tuple[FunDecl, ...] = ()
    side1: str = ""
    side2: str = ""
    lits1: tuple[Lit, ...] = ()
    lits2: tuple[Lit, ...] = ()
    mixed: tuple[Lit, ...] = ()
    mode: Optional[str] = None
    si_sorts: tuple[Sort, ...] = ()

    def euf_signature(self) -> Signature:
        return _euf_signature(self.sorts, self.functions, (self.side1, self.side2))

    def theories(self) -> tuple[TheorySpec, TheorySpec]:
        sig = self.euf_signature()
        return get_theory(self.side1, sig), get_theory(self.side2, sig)

    def combination_mode(self, override: Optional[str] = None, si: Optional[Sequence[Sort]] = None) -> Mode:
        return mode_from_name(override or self.mode or "polite", self.si_sorts if si is None else si)

    def purified(self) -> PurifiedProblem:
        t1, t2 = self.theories()
        avoid = {v.name for v in self.variables}
        mixed = purify(self.mixed, t1.signature, t2.signature, avoid)
        return PurifiedProblem(
            self.lits1 + mixed.gamma1,
            self.lits2 + mixed.gamma2,
            t1.sorts & t2.sorts,
            mixed.origin,
        )

    def pretty(self) -> str:
        lines = [f"sort {s}" for s in self.sorts]
        lines += [f"var {v.name} {v.sort}" for v in self.variables]
        lines += [" ".join(["fun", f.name, *(str(a) for a in f.args), str(f.result)]) for f in self.functions]
        lines += [f"side1 {self.side1}", f"side2 {self.side2}"]
        lines += [f"lit1 {l}" for l in self.lits1]
        lines += [f"lit2 {l}" for l in self.lits2]
        lines += [f"lit {l}" for l in self.mixed]
        if self.mode:
            lines.append(f"mode {self.mode}")
        if self.si_sorts:
            lines.append("si-sorts " + " ".join(str(s) for s in self.si_sorts))
        return "\n".join(lines) + "\n"


def mode_from_name(name: str, si_sorts: Sequence[Sort] = ()) -> Mode:
    if name not in MODE_NAMES:
        raise CombError(f"unknown mode {name!r}; expected one of {', '.join(MODE_NAMES)}")
    if name.startswith(GENERAL):
        return Mode(GENERAL, frozenset(si_sorts), int(name[-1]))
    if name == OPTIMIZED:
        return Mode(OPTIMIZED, frozenset(si_sorts))
    return Mode(name)


def _euf_signature(sorts, functions, sides) -> Signature:
    """Signature of the ``euf`` component: declared functions and the sorts no other component owns."""
    owned: set[Sort] = set()
    for side in sides:
        for part in side.split("+"):
            if part.strip() != "euf" and part.strip():
                try:
                    owned |= get_theory(part.strip()).sorts
                except CombError:
                    pass
    fun_sorts = {s for f in functions for s in f.args + (f.result,)}
    return Signature(frozenset(fun_sorts | (set(sorts) - owned)), {f.name: f for f in functions})


# --- s-expressions ---------------------------------------------------------------


@dataclass
class _Sexp:
    value: object  # str or list of _Sexp
    column: int


def _read_sexp(text: str, line: int, start_col: int) -> _Sexp:
    tokens: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        col = start_col + m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), col))
        pos = m.end()
        if text[pos:].strip() == "":
            break
    if not tokens:
        raise ParseError("expected a literal", line, start_col)
    it = iter(tokens)

    def build(tok) -> _Sexp:
        word, col = tok
        if word == "(":
            items = []
            for t in it:
                if t[0] == ")":
                    return _Sexp(items, col)
                items.append(build(t))
            raise ParseError("unbalanced parenthesis", line, col)
        if word == ")":
            raise ParseError("unexpected ')'", line, col)
        return _Sexp(word, col)

    out = build(next(it))
    rest = list(it)
    if rest:
        raise ParseError(f"trailing input {rest[0][0]!r}", line, rest[0][1])
    return out


class _LiteralReader:
    def __init__(self, variables: dict[str, Var], sig: Signature, line: int):
        self.variables = variables
        self.sig = sig
        self.line = line

    def error(self, cls, msg: str, col: int):
        if cls is ParseError:
            return ParseError(msg, self.line, col)
        return cls(f"{self.line}:{col}: {msg}")

    def term(self, e: _Sexp) -> Term:
        if isinstance(e.value, str):
            w = e.value
            if w in self.variables:
                return self.variables[w]
            if re.fullmatch(r"-?\d+", w):
                return Const(int(w), INT)
            if re.fullmatch(r"#b[01]{4}", w):
                return Const(int(w[2:], 2), BV4)
            decl = self.sig.functions.get(w)
            if decl is not None and not decl.args:
                return App(w, (), decl.result)
            raise self.error(UnknownSymbol, f"unknown symbol {w!r}", e.column)
        if not e.value or not isinstance(e.value[0].value, str):
            raise self.error(ParseError, "expected a function application", e.column)
        fn = e.value[0].value
        decl = self.sig.functions.get(fn)
        if decl is None:
            raise self.error(UnknownSymbol, f"unknown function {fn!r}", e.value[0].column)
        args = tuple(self.term(a) for a in e.value[1:])
        return App(fn, args, decl.result)

    def literal(self, e: _Sexp) -> list[Lit]:
        if isinstance(e.value, str):
            if e.value == "true":
                return [TRUE]
            if e.value == "false":
                return [FALSE]
            raise self.error(ParseError, f"expected a literal, got {e.value!r}", e.column)
        if not e.value or not isinstance(e.value[0].value, str):
            raise self.error(ParseError, "expected an operator", e.column)
        op = e.value[0].value
        args = e.value[1:]
        if op == "not":
            if len(args) != 1:
                raise self.error(ParseError, "not takes one literal", e.column)
            inner = self.literal(args[0])
            if len(inner) != 1:
                raise self.error(ParseError, "not applies to a single literal", e.column)
            return [inner[0].negate()]
        terms = [self.term(a) for a in args]
        if op == "=":
            if len(terms) != 2:
                raise self.error(ParseError, "= takes two terms", e.column)
            return [Lit(Eq(*terms), True)]
        if op == "distinct":
            if len(terms) < 2:
                raise self.error(ParseError, "distinct takes at least two terms", e.column)
            return [Lit(Eq(a, b), False) for i, a in enumerate(terms) for b in terms[i + 1:]]
        if op in self.sig.predicates:
            return [Lit(Pred(op, tuple(terms)), True)]
        raise self.error(UnknownSymbol, f"unknown predicate {op!r}", e.value[0].column)


def _split_lines(text: str) -> Iterator[tuple[int, str, str, int]]:
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split(";", 1)[0]
        if line.lstrip().startswith("#"):
            continue
        # a trailing comment starts at "# " (bit-vector literals are "#b....")
        line = re.split(r"\s#(?!b[01])", line, maxsplit=1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        key, _, rest = stripped.partition(" ")
        col = line.index(key) + 1
        rest_col = col + len(key) + 1 + (len(rest) - len(rest.lstrip()))
        yield n, key, rest.strip(), rest_col


def _check_name(name: str, line: int, col: int) -> str:
    if FRESH_MARK in name:
        raise ParseError(f"names containing {FRESH_MARK!r} are reserved: {name!r}", line, col)
    if not _NAME.match(name):
        raise ParseError(f"bad identifier {name!r}", line, col)
    return name


def parse_problem(text: str) -> ProblemFile:
    """Parse a problem file; errors carry line and column."""
    entries = list(_split_lines(text))
    if not entries:
        raise ParseError("empty problem file", 1, 1)
    sorts: dict[str, Sort] = {}
    variables: dict[str, Var] = {}
    functions: dict[str, FunDecl] = {}
    side1 = side2 = ""
    mode = None
    si: list[Sort] = []
    literal_lines = []

    def sort_of(name: str, line: int, col: int) -> Sort:
        if name not in sorts:
            raise SortError(f"{line}:{col}: undeclared sort {name!r}")
        return sorts[name]

    for line, key, rest, col in entries:
        words = rest.split()
        if key not in KEYWORDS:
            raise ParseError(f"unknown directive {key!r}", line, 1)
        if key in ("lit1", "lit2", "lit"):
            literal_lines.append((line, key, rest, col))
            continue
        if key == "sort":
            if len(words) != 1:
                raise ParseError("sort takes one name", line, col)
            sorts[words[0]] = Sort(_check_name(words[0], line, col))
        elif key == "var":
            if len(words) != 2:
                raise ParseError("var takes a name and a sort", line, col)
            name = _check_name(words[0], line, col)
            if name in variables:
                raise ParseError(f"variable {name!r} declared twice", line, col)
            variables[name] = Var(name, sort_of(words[1], line, col + len(words[0]) + 1))
        elif key == "fun":
            if len(words) < 2:
                raise ParseError("fun takes a name, argument sorts and a result sort", line, col)
            name = _check_name(words[0], line, col)
            arg_sorts = tuple(sort_of(w, line, col) for w in words[1:])
            functions[name] = FunDecl(name, arg_sorts[:-1], arg_sorts[-1])
        elif key in ("side1", "side2"):
            if len(words) != 1:
                raise ParseError(f"{key} takes one theory name", line, col)
            if key == "side1":
                side1 = words[0]
            else:
                side2 = words[0]
        elif key == "mode":
            if len(words) != 1 or words[0] not in MODE_NAMES:
                raise ParseError(f"mode must be one of {', '.join(MODE_NAMES)}", line, col)
            mode = words[0]
        elif key == "si-sorts":
            si = [sort_of(w, line, col) for w in words]
    if not side1 or not side2:
        raise ParseError("both side1 and side2 must be given", entries[-1][0], 1)
    base = ProblemFile(tuple(sorts.values()), tuple(variables.values()), tuple(functions.values()), side1, side2)
    t1, t2 = base.theories()
    for s in sorts.values():
        if s not in t1.sorts | t2.sorts:
            raise SortError(f"sort {s} belongs to neither {side1} nor {side2}")
    for v in variables.values():
        if v.sort not in t1.sorts | t2.sorts:
            raise SortError(f"variable {v.name} has sort {v.sort} outside both theories")
    full = t1.signature.union(t2.signature)
    lits: dict[str, list[Lit]] = {"lit1": [], "lit2": [], "lit": []}
    for line, key, rest, col in literal_lines:
        reader = _LiteralReader(variables, full, line)
        parsed = reader.literal(_read_sexp(rest, line, col))
        target = {"lit1": t1.signature, "lit2": t2.signature, "lit": full}[key]
        for l in parsed:
            try:
                sort_check(l, target)
            except SortError as e:
                raise type(e)(f"{line}:{col}: {e}") from None
        lits[key].extend(parsed)
    return ProblemFile(
        base.sorts, base.variables, base.functions, side1, side2,
        tuple(lits["lit1"]), tuple(lits["lit2"]), tuple(lits["lit"]), mode, tuple(si),
    )


def read_problem(path) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())
