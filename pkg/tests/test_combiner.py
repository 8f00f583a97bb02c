import pytest

from combsmt.arrangements import arrangement_to_formula, bell
from combsmt.bench import lists_instance
from combsmt.combiner import (
    EMPTY,
    NONEMPTY,
    GENERAL,
    Mode,
    PurifiedProblem,
    check_mode_applicability,
    combine,
    combined_cardinality_emptiness,
    general,
    nelson_oppen,
    optimized,
    polite,
    purify,
    variable_set,
)
from combsmt.errors import HypothesisViolation, NonDisjointSignatures
from combsmt.logic import App, Const, Sort, Var, conj, eq, satisfies_all
from combsmt.theories import BV4, INT, LIST, SIGMA1, SIGMA2, bv4, cons, get_theory, nil, t11, t23, t_atleast
from combsmt.theories.lists import list_signature

from corpus import applicable_modes, corpus

x1 = Var("x", SIGMA1)


def unsound_problem():
    return PurifiedProblem((), (eq(x1, x1),), frozenset({SIGMA1, SIGMA2}))


def lists_family(n):
    p = lists_instance(n)
    t1, t2 = p.theories()
    return p.purified(), t1, t2


class TestPurify:
    def test_lists_family_is_unchanged(self):
        p = lists_instance(2)
        pure = p.purified()
        assert set(pure.gamma1) == set(p.lits1) and set(pure.gamma2) == set(p.lits2)
        assert pure.origin == {}

    def test_alien_subterm(self):
        xi, v, a = Var("x", INT), Var("v", BV4), Var("a", LIST)
        t1 = get_theory("int_frag+bv4")
        plus = App("+", (xi, Const(1, INT)), INT)
        pure = purify([eq(cons(plus, v, nil()), a)], t1.signature, list_signature())
        (u,) = pure.origin
        assert u.sort == INT and pure.origin[u] == plus
        assert eq(u, plus) in pure.gamma1 or eq(plus, u) in pure.gamma1
        assert all(not isinstance(t, App) or t.fn != "+" for l in pure.gamma2 for t in l.atom.terms)

    def test_single_signature(self):
        xi, yi = Var("x", INT), Var("y", INT)
        pure = purify([eq(xi, yi), eq(xi, Const(5, INT))], get_theory("int_frag").signature, list_signature())
        assert pure.gamma2 == ()

    def test_non_disjoint(self):
        sig = get_theory("int_frag").signature
        with pytest.raises(NonDisjointSignatures):
            purify([], sig, sig)


class TestVariableSet:
    def test_lists_family_sets(self):
        pure, t1, t2 = lists_family(3)
        wit = t2.witness(conj(*pure.gamma2), {v.name for v in pure.variables()})
        pol = variable_set(polite(), pure.gamma1, wit, pure.shared_sorts)
        opt = variable_set(optimized({INT}), pure.gamma1, wit, pure.shared_sorts)
        assert {v.name for v in pol.all_vars()} == {"x", "v", "w", "y1", "y2", "y3"}
        assert {v.name for v in opt.all_vars()} == {"x", "v", "w"}

    def test_nelson_oppen_disjoint(self):
        a, b = Var("a", SIGMA1), Var("b", SIGMA1)
        assert len(variable_set(nelson_oppen(), [eq(a, a)], [eq(b, b)], {SIGMA1}).all_vars()) == 0

    def test_optimized_subset_of_polite(self):
        for case in corpus(per_pair=3, lists=10):
            t2, p = case.t2, case.problem
            if t2.witness is None:
                continue
            wit = t2.witness(conj(*p.gamma2), {v.name for v in p.variables()})
            pol = variable_set(polite(), p.gamma1, wit, p.shared_sorts)
            for si in (frozenset(), *({s} for s in p.shared_sorts), p.shared_sorts):
                opt = variable_set(optimized(si), p.gamma1, wit, p.shared_sorts)
                for s in p.shared_sorts:
                    assert opt.get_vars(s) <= pol.get_vars(s)


class TestApplicability:
    def test_unsound_pair_rejected(self):
        with pytest.raises(HypothesisViolation, match="plain"):
            check_mode_applicability(t11(), t23(), polite(), {SIGMA1, SIGMA2})

    def test_lists_family_optimized_ok(self):
        _, t1, t2 = lists_family(1)
        check_mode_applicability(t1, t2, optimized({INT}), {INT, BV4})

    def test_nelson_oppen_bv4(self):
        with pytest.raises(HypothesisViolation, match="bv4"):
            check_mode_applicability(get_theory("int_frag"), bv4(), nelson_oppen(), {BV4})

    def test_si_must_be_shared(self):
        with pytest.raises(HypothesisViolation):
            check_mode_applicability(t_atleast(2), t_atleast(3), optimized({SIGMA1}), {Sort("s")})

    def test_general_cases(self):
        _, t1, t2 = lists_family(1)
        for case in (1, 2, 3):
            check_mode_applicability(t1, t2, general(case, {INT}), {INT, BV4})
        with pytest.raises(HypothesisViolation):
            check_mode_applicability(t1, t2, general(1, {BV4}), {INT, BV4})

    def test_mode_validation(self):
        with pytest.raises(ValueError):
            Mode("magic")
        with pytest.raises(ValueError):
            Mode(GENERAL, frozenset(), 4)
        assert str(optimized({INT})) == "optimized(si=int)"


class TestCombine:
    def test_unsound_run_is_refused(self):
        with pytest.raises(HypothesisViolation):
            combine(unsound_problem(), t11(), t23(), polite())

    def test_unsound_override_reports_sat(self):
        out = combine(unsound_problem(), t11(), t23(), polite(), override=True)
        assert out.is_sat and out.violation
        assert combined_cardinality_emptiness(t11(), t23()) == EMPTY

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_lists_family_counts(self, n):
        pure, t1, t2 = lists_family(n)
        pol = combine(pure, t1, t2, polite())
        opt = combine(pure, t1, t2, optimized({INT}))
        assert pol.is_sat and opt.is_sat
        assert pol.arrangements_total == bell(n + 1) * bell(2)
        assert opt.arrangements_total == 2

    def test_sat_outcome_invariants(self):
        pure, t1, t2 = lists_family(2)
        out = combine(pure, t1, t2, optimized({INT}))
        delta = arrangement_to_formula(out.satisfying_arrangement)
        assert t1.decide(pure.gamma1 + delta)
        m1, m2 = out.models
        assert satisfies_all(m1, pure.gamma1 + delta) and satisfies_all(m2, pure.gamma2 + delta)
        assert 1 <= out.arrangements_examined <= out.arrangements_total

    def test_unsat(self):
        pure, t1, t2 = lists_family(1)
        bad = PurifiedProblem(pure.gamma1 + (eq(Var("x", INT), Var("y1", INT)), eq(Var("x", INT), Const(4, INT))), pure.gamma2, pure.shared_sorts)
        out = combine(bad, t1, t2, optimized({INT}))
        assert not out.is_sat and out.arrangements_examined == out.arrangements_total

    def test_workers_mark_approximate(self):
        pure, t1, t2 = lists_family(2)
        out = combine(pure, t1, t2, polite(), workers=2)
        assert out.approximate and out.is_sat

    def test_deterministic(self):
        pure, t1, t2 = lists_family(3)
        a = combine(pure, t1, t2, polite())
        b = combine(pure, t1, t2, polite())
        assert (a.verdict, str(a.satisfying_arrangement), a.arrangements_examined) == (
            b.verdict, str(b.satisfying_arrangement), b.arrangements_examined)


def test_emptiness():
    assert combined_cardinality_emptiness(t11(), t23()) == EMPTY
    assert combined_cardinality_emptiness(t_atleast(2), t_atleast(3)) == NONEMPTY


def test_modes_agree_on_corpus_sample():
    for case in corpus(per_pair=4, lists=12):
        verdicts = {combine(case.problem, case.t1, case.t2, m).verdict for m in applicable_modes(case.t1, case.t2, case.problem.shared_sorts)}
        assert len(verdicts) <= 1, case.label
