import itertools

import pytest
from hypothesis import assume, given, settings, strategies as st

from combsmt.errors import (
    CombError,
    NonEmptySignature,
    TooManyVariables,
    UnguardedSelector,
    UnknownTheory,
    UnsupportedLiteral,
)
from combsmt.logic import (
    TRUE,
    App,
    Const,
    FunDecl,
    Signature,
    Sort,
    Var,
    as_literals,
    conj,
    eq,
    free_vars,
    is_infinite,
    neq,
    pred,
    satisfies_all,
    subterms,
    to_dnf,
)
from combsmt.oracle import SearchBounds, bounded_models
from combsmt.theories import (
    BV4,
    DEFAULT_SORT,
    INT,
    LIST,
    PLAIN,
    SIGMA1,
    SIGMA2,
    STRONG,
    STRONGLY_FW,
    bv,
    bv4,
    cons,
    decide_bv4,
    decide_cardinality_theory,
    decide_euf,
    decide_int_fragment,
    decide_list_fragment,
    get_theory,
    int_frag,
    list_pair,
    min_model_sizes,
    nil,
    t0,
    t11,
    t23,
    t_atleast,
    t_even_inf,
    wit_even,
    wit_identity,
    wit_mono_distinct,
    wit_t0_plain,
    wit_t0_strong,
    wit_t23,
)
from combsmt.theories.euf import euf
from combsmt.theories.lists import wit_list

S = DEFAULT_SORT
x, y, z, w = (Var(n, S) for n in "xyzw")


def n_fresh(before, after):
    return len(free_vars(after) - free_vars(before))


class TestMinModelSizes:
    def test_clash(self):
        assert min_model_sizes([eq(x, w), neq(x, w)]) is None

    def test_merged_arrangement(self):
        xs = [Var(n, SIGMA1) for n in ("x", "x1", "x2", "x3")]
        ys = [Var(n, SIGMA2) for n in ("y1", "y2", "y3")]
        delta = [eq(a, b) for a, b in zip(xs, xs[1:])] + [eq(a, b) for a, b in zip(ys, ys[1:])]
        assert min_model_sizes(delta) == {SIGMA1: 1, SIGMA2: 1}

    def test_path(self):
        assert min_model_sizes([neq(x, y), neq(y, z)]) == {S: 2}

    def test_unused_sort_reports_one(self):
        assert min_model_sizes([neq(x, y)], [S, SIGMA1]) == {S: 2, SIGMA1: 1}

    def test_non_empty_signature(self):
        f = App("f", (x,), S)
        with pytest.raises(NonEmptySignature):
            min_model_sizes([eq(f, x)])


class TestCardinalityDeciders:
    def test_t11_merged(self):
        xs = [Var(n, SIGMA1) for n in ("x", "x1")]
        ys = [Var(n, SIGMA2) for n in ("y1", "y2")]
        r = t11().decide([eq(*xs), eq(*ys)])
        assert r and r.profile == {SIGMA1: 1, SIGMA2: 1}

    def test_t23_eq1_with_merged_arrangement(self):
        phi = wit_t23(eq(Var("x", SIGMA1), Var("x", SIGMA1)), sort1=SIGMA1, sort2=SIGMA2)
        xs = sorted(free_vars(phi, SIGMA1))
        ys = sorted(free_vars(phi, SIGMA2))
        delta = [eq(a, b) for a, b in zip(xs, xs[1:])] + [eq(a, b) for a, b in zip(ys, ys[1:])]
        r = t23().decide(list(as_literals(phi)) + delta)
        assert r
        # the smallest all-finite accepted map is preferred
        assert r.profile == {SIGMA1: 3, SIGMA2: 3} and satisfies_all(r.model, delta)

    def test_t0_plain_decide(self):
        assert t0().decide([eq(x, x), eq(w, w), eq(x, w)])

    def test_even_triangle(self):
        r = t_even_inf().decide([neq(x, y), neq(y, z), neq(x, z)])
        assert r and r.profile == {S: 4} and r.model.size(S) == 4

    def test_unsat_forms(self):
        assert not t11().decide([neq(Var("a", SIGMA1), Var("b", SIGMA1))])
        assert not t_atleast(2).decide([eq(x, y), neq(x, y)])


def finite_only(accepts):
    return lambda m: all(not is_infinite(c) for c in m.values()) and accepts(m)


TWO_SORT_VARS = [Var("a", SIGMA1), Var("b", SIGMA1), Var("c", SIGMA2), Var("d", SIGMA2)]
ONE_SORT_VARS = [x, y, z, w]


def literal_sets(variables):
    pairs = [(p, q) for p, q in itertools.combinations(variables, 2) if p.sort == q.sort]
    lit = st.builds(lambda pq, pos: eq(*pq) if pos else neq(*pq), st.sampled_from(pairs), st.booleans())
    return st.lists(lit, max_size=5)


@pytest.mark.parametrize(
    "theory,variables",
    [
        (t_atleast(2), ONE_SORT_VARS),
        (t_even_inf(), ONE_SORT_VARS),
        (t11(), TWO_SORT_VARS),
        (t23(), TWO_SORT_VARS),
    ],
    ids=["t_atleast2", "t_even_inf", "t11", "t23"],
)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_cardinality_decider_matches_bounded_models(theory, variables, data):
    lits = data.draw(literal_sets(variables))
    sorts = sorted(theory.sorts)
    ours = decide_cardinality_theory(lits, finite_only(theory.accepts), sorts, theory.threshold)
    phi = conj(*lits, *(eq(v, v) for v in variables))
    bounds = SearchBounds(default=6)
    found = next((m for m in bounded_models(phi, theory.signature, bounds) if theory.accepts(m.sizes())), None)
    assert bool(ours) == (found is not None)
    if ours:
        assert satisfies_all(ours.model, lits)
        assert ours.model.sizes() == found.sizes() or sum(ours.model.sizes().values()) <= sum(found.sizes().values())


U = Sort("u")
f_decl, g_decl = FunDecl("f", (U,), U), FunDecl("g", (U,), U)
SIG1 = Signature(frozenset({U}), {"f": f_decl})
SIG2 = Signature(frozenset({U}), {"f": f_decl, "g": g_decl})
UV = [Var(n, U) for n in ("p", "q", "r")]


def f(t):
    return App("f", (t,), U)


def euf_terms(fns):
    leaf = st.sampled_from(UV)
    return st.recursive(leaf, lambda k: st.builds(lambda name, t: App(name, (t,), U), st.sampled_from(fns), k), max_leaves=3)


class TestEuf:
    def test_congruence(self):
        xu, yu, zu = UV
        assert not decide_euf([eq(f(xu), yu), eq(xu, zu), neq(f(zu), yu)], SIG1)

    def test_two_elements(self):
        r = decide_euf([neq(f(UV[0]), UV[0])], SIG1)
        assert r and r.model.size(U) == 2

    def test_gcd(self):
        p = UV[0]

        def fn(k):
            t = p
            for _ in range(k):
                t = f(t)
            return t

        lits = [eq(fn(3), p), eq(fn(5), p), neq(f(p), p)]
        assert not decide_euf(lits, SIG1)
        assert next(iter(bounded_models(conj(*lits), SIG1, SearchBounds(default=5))), None) is None

    @settings(max_examples=60, deadline=None)
    @given(data=st.data(), two=st.booleans())
    def test_matches_brute_force(self, data, two):
        sig = SIG2 if two else SIG1
        terms = euf_terms(["f", "g"] if two else ["f"])
        lits = data.draw(st.lists(st.builds(lambda a, b, pos: eq(a, b) if pos else neq(a, b), terms, terms, st.booleans()), min_size=1, max_size=3))
        distinct = {t for l in lits for t0_ in l.atom.terms for t in subterms(t0_)}
        # a satisfiable instance has a model no larger than its number of subterms
        assume(len(distinct) <= (3 if two else 4))
        ours = decide_euf(lits, sig)
        brute = next(iter(bounded_models(conj(*lits), sig, SearchBounds(default=len(distinct)))), None)
        assert bool(ours) == (brute is not None)
        if ours:
            assert satisfies_all(ours.model, lits)


class TestIntFragment:
    xi, yi, zi = (Var(n, INT) for n in ("x", "y", "z"))

    def test_constant(self):
        r = decide_int_fragment([eq(self.xi, Const(5, INT))])
        assert r and r.model.value(self.xi) == 5

    def test_cycle(self):
        assert not decide_int_fragment([pred("<", self.xi, self.yi), pred("<", self.yi, self.xi)])

    def test_diseq_clash(self):
        five = Const(5, INT)
        assert not decide_int_fragment([eq(self.xi, five), eq(self.yi, five), neq(self.xi, self.yi)])

    def test_out_of_fragment(self):
        with pytest.raises(UnsupportedLiteral, match=r"\+"):
            decide_int_fragment([eq(App("+", (self.xi, self.yi), INT), self.zi)])

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.tuples(st.sampled_from(["=", "!=", "<", "<="]), st.integers(0, 2), st.integers(0, 2), st.one_of(st.none(), st.integers(-2, 2))), max_size=5))
    def test_matches_small_search(self, spec):
        vs = [self.xi, self.yi, self.zi]
        lits = []
        for op, i, j, c in spec:
            rhs = Const(c, INT) if c is not None else vs[j]
            lits.append({"=": eq, "!=": neq}[op](vs[i], rhs) if op in ("=", "!=") else pred(op, vs[i], rhs))
        ours = decide_int_fragment(lits)
        # difference constraints with constants in [-2, 2] and 3 variables have solutions in [-6, 6]
        brute = any(
            satisfies_all(_int_model(dict(zip(vs, vals))), lits) for vals in itertools.product(range(-6, 7), repeat=3)
        )
        assert bool(ours) == brute
        if ours:
            assert satisfies_all(ours.model, lits)


def _int_model(assignment):
    from combsmt.logic import FiniteInterpretation
    from combsmt.theories.intfrag import INT_FUNCTIONS, INT_PREDICATES

    return FiniteInterpretation({INT: tuple(range(-6, 7))}, assignment, INT_FUNCTIONS, INT_PREDICATES)


class TestBv4:
    v, wv = Var("v", BV4), Var("w", BV4)

    def test_example(self):
        r = decide_bv4([eq(self.v, bv("0000")), eq(self.wv, App("&", (self.wv, self.v), BV4))])
        assert r and r.model.value(self.wv) == 0

    def test_mask(self):
        lits = [neq(self.v, bv("0000")), eq(App("&", (self.v, bv("1111")), BV4), bv("0000"))]
        assert not decide_bv4(lits)
        assert not any((k & 0b1111) == 0 and k != 0 for k in range(16))

    def test_trivial(self):
        assert decide_bv4([eq(self.v, self.v)])

    def test_cap(self):
        vs = [Var(f"b{i}", BV4) for i in range(4)]
        with pytest.raises(TooManyVariables):
            decide_bv4([eq(a, a) for a in vs], cap=3)

    def test_not_stably_infinite(self):
        t = bv4()
        assert not t.is_stably_infinite({BV4}) and not t.is_smooth({BV4})

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(st.sampled_from(["&", "|", "^"]), st.integers(0, 15), st.booleans()), min_size=1, max_size=3))
    def test_matches_enumeration(self, spec):
        lits = []
        for op, k, pos in spec:
            t = App(op, (self.v, self.wv), BV4)
            lits.append(eq(t, Const(k, BV4)) if pos else neq(t, Const(k, BV4)))
        ops = {"&": int.__and__, "|": int.__or__, "^": int.__xor__}
        brute = any(
            all((ops[op](a, b) == k) == pos for op, k, pos in spec) for a in range(16) for b in range(16)
        )
        assert bool(decide_bv4(lits)) == brute


class TestLists:
    xi, v = Var("x", INT), Var("v", BV4)
    a, b = Var("a", LIST), Var("b", LIST)

    def test_nil_clash(self):
        assert not decide_list_fragment([eq(self.a, cons(self.xi, self.v, self.b)), eq(self.a, nil())])

    def test_cycle(self):
        assert not decide_list_fragment([eq(self.a, cons(self.xi, self.v, self.a))])

    def test_cycle_has_no_small_model(self):
        # bounded term enumeration: a list of depth <= 4 is never its own tail
        def lists(depth):
            if depth == 0:
                return [()]
            shorter = lists(depth - 1)
            return [()] + [((0, 0),) + l for l in shorter]

        assert all(l[1:] != l for l in lists(4) if l)

    def test_lists_family_side2(self):
        ys = [Var(f"y{i}", INT) for i in (1, 2)]
        wv = Var("w", BV4)
        la = [Var(f"a{i}", LIST) for i in range(4)]
        lits = [eq(la[0], cons(self.xi, self.v, la[1]))] + [eq(la[i], cons(ys[i - 1], wv, la[i + 1])) for i in (1, 2)]
        r = decide_list_fragment(lits)
        assert r and satisfies_all(r.model, lits)

    def test_injectivity(self):
        yi = Var("y", INT)
        lits = [eq(self.a, cons(self.xi, self.v, self.b)), eq(self.a, cons(yi, self.v, self.b)), neq(self.xi, yi)]
        assert not decide_list_fragment(lits)

    def test_guarded_selector(self):
        car = App("car1", (self.a,), INT)
        assert decide_list_fragment([neq(self.a, nil()), eq(car, self.xi)])
        with pytest.raises(UnguardedSelector):
            decide_list_fragment([eq(car, self.xi)])

    def test_metadata(self):
        t = list_pair()
        assert t.is_stably_infinite({INT, BV4, LIST})
        assert t.is_strongly_polite({INT, BV4})
        assert t.has_two_set(STRONGLY_FW, {BV4}, {INT})


class TestWitnesses:
    def test_t0_plain(self):
        out = wit_t0_plain(eq(x, x), sort=S)
        assert len(as_literals(out)) == 3 and n_fresh(eq(x, x), out) == 2
        out = wit_t0_plain(TRUE, sort=S)
        assert all(l.positive for l in as_literals(out)) and len(free_vars(out)) == 2

    def test_t0_strong(self):
        out = wit_t0_strong(eq(x, x), sort=S)
        lits = as_literals(out)
        assert lits[0] == eq(x, x) and not lits[1].positive and n_fresh(eq(x, x), out) == 2
        assert len(free_vars(wit_t0_strong(TRUE, sort=S))) == 2

    def test_repeated_application_is_fresh(self):
        once = wit_t0_plain(eq(x, x), sort=S)
        twice = wit_t0_plain(once, sort=S)
        assert len(free_vars(twice)) == 5
        twice = wit_t0_strong(wit_t0_strong(TRUE, sort=S), sort=S)
        assert len(free_vars(twice)) == 4

    def test_t23_eq1(self):
        phi = eq(Var("x", SIGMA1), Var("x", SIGMA1))
        out = wit_t23(phi, sort1=SIGMA1, sort2=SIGMA2)
        assert n_fresh(phi, out) == 6
        assert len(free_vars(out, SIGMA1)) == 4 and len(free_vars(out, SIGMA2)) == 3
        assert all(l.positive and l.atom.lhs == l.atom.rhs for l in as_literals(out))

    def test_even_shapes(self):
        out = wit_even(eq(x, x), sort=S)
        cubes = to_dnf(out)
        assert len(cubes) == 1 and any(not l.positive for l in cubes[0])
        assert to_dnf(wit_even(TRUE, sort=S)) == []
        assert len(to_dnf(wit_even(conj(eq(x, x), eq(y, y)), sort=S))) == 3

    def test_even_cap(self):
        phi = conj(*(eq(Var(f"v{i}", S), Var(f"v{i}", S)) for i in range(4)))
        with pytest.raises(TooManyVariables):
            wit_even(phi, sort=S, cap=3)

    def test_mono_distinct(self):
        out = wit_mono_distinct(eq(x, x), n=2, sort=S)
        assert [l.positive for l in as_literals(out)] == [True, False]
        assert len(as_literals(wit_mono_distinct(eq(x, x), n=1, sort=S))) == 2
        out = wit_mono_distinct(eq(x, x), n=3, sort=S)
        assert sum(not l.positive for l in as_literals(out)) == 3

    def test_identity(self):
        a0, a1 = Var("a0", LIST), Var("a1", LIST)
        g2 = eq(a0, cons(Var("x", INT), Var("v", BV4), a1))
        for phi in (g2, eq(x, y), TRUE):
            assert wit_identity(phi) == phi
        assert wit_list(g2, elem_sorts=(INT, BV4)) == g2

    def test_witness_checks_freshness(self):
        t = t0()
        with pytest.raises(CombError):
            type(t.witness)(lambda phi, avoid: eq(x, x), STRONG, frozenset({S}))(eq(y, y))

    def test_strength_flags(self):
        assert t23().witness.strength == PLAIN
        assert t_even_inf().witness.strength == PLAIN
        assert t_atleast(3).witness.strength == STRONG
        assert t23().is_smooth({SIGMA1, SIGMA2})
        assert not t_even_inf().is_smooth({S})


one_sort_formulas = st.lists(
    st.builds(lambda pq, pos: eq(*pq) if pos else neq(*pq), st.sampled_from(list(itertools.combinations_with_replacement([x, y, z], 2))), st.booleans()),
    max_size=4,
)


@pytest.mark.parametrize("theory", [t_atleast(2), t_atleast(3), t_even_inf()], ids=str)
@settings(max_examples=40, deadline=None)
@given(lits=one_sort_formulas)
def test_witness_equivalence_one_sort(theory, lits):
    phi = conj(*lits)
    if theory.name == "t_even_inf" and not free_vars(phi):
        # the even-class disjunction over a single fresh variable is empty
        assert to_dnf(theory.witness(phi)) == [] and theory.decide(lits)
        return
    direct = bool(theory.decide(lits))
    via = any(theory.decide(c) for c in to_dnf(theory.witness(phi)))
    assert direct == via


two_sort_formulas = st.lists(
    st.builds(
        lambda pq, pos: eq(*pq) if pos else neq(*pq),
        st.sampled_from([(p, q) for p, q in itertools.combinations_with_replacement(TWO_SORT_VARS[:3], 2) if p.sort == q.sort]),
        st.booleans(),
    ),
    max_size=4,
)


@settings(max_examples=40, deadline=None)
@given(lits=two_sort_formulas)
def test_witness_equivalence_t23(lits):
    t = t23()
    assert bool(t.decide(lits)) == any(t.decide(c) for c in to_dnf(t.witness(conj(*lits))))


def test_witness_equivalence_lists():
    t = list_pair()
    xi, v = Var("x", INT), Var("v", BV4)
    a, b = Var("a", LIST), Var("b", LIST)
    for lits in ([eq(a, cons(xi, v, b))], [eq(a, cons(xi, v, a))], [neq(a, b)], [eq(a, nil()), neq(a, b)]):
        assert bool(t.decide(lits)) == any(t.decide(c) for c in to_dnf(t.witness(conj(*lits))))


class TestRoster:
    def test_names(self):
        for name in ("t_atleast:3", "t23", "t11", "t_even_inf", "int_frag", "bv4", "list_pair", "int_frag+bv4"):
            assert get_theory(name).name
        assert get_theory("t_atleast:2@s1").sorts == {SIGMA1}

    def test_euf_needs_signature(self):
        assert get_theory("euf", SIG1).sorts == {U}
        with pytest.raises(CombError):
            get_theory("euf")

    def test_unknown(self):
        with pytest.raises(UnknownTheory):
            get_theory("lia")

    def test_composite_metadata(self):
        t = get_theory("int_frag+bv4")
        assert t.is_stably_infinite({INT}) and not t.is_stably_infinite({BV4})
        r = t.decide([eq(Var("x", INT), Const(5, INT)), eq(Var("v", BV4), bv("0000"))])
        assert r and r.model.value(Var("x", INT)) == 5


def test_declared_sorts_within_signature():
    for t in (t0(), t11(), t23(), t_even_inf(), int_frag(), bv4(), list_pair(), euf(SIG2)):
        assert t.stably_infinite_sorts <= t.sorts and t.smooth_sorts <= t.sorts
        if t.witness is not None:
            assert t.witness.sorts <= t.sorts
