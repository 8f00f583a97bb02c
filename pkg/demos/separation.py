"""Why polite combination needs a strong witness.

t11 has exactly one element per sort.  t23 has either two elements of s1
with infinitely many of s2, or at least three of each.  The two theories
agree on no cardinalities, so every formula is unsatisfiable in their
combination.  The witness for t23 just adds three fresh tautologies per
sort, which is a witness but not a strong one, and polite combination
with it wrongly answers sat.

    python3 demos/separation.py
"""

from combsmt.combiner import PurifiedProblem, combine, combined_cardinality_emptiness, polite
from combsmt.errors import HypothesisViolation
from combsmt.logic import Var, eq
from combsmt.oracle import oracle_decide_combined, refute_strong_witness
from combsmt.theories import SIGMA1, SIGMA2, t11, t23


def main() -> None:
    t1, t2 = t11(), t23()
    x = Var("x", SIGMA1)
    problem = PurifiedProblem((), (eq(x, x),), frozenset({SIGMA1, SIGMA2}))

    try:
        combine(problem, t1, t2, polite())
    except HypothesisViolation as e:
        print(f"1. the engine refuses the run: {e}")

    out = combine(problem, t1, t2, polite(), override=True)
    print(f"2. forcing it anyway answers {out.verdict}")
    print(f"   wit(Gamma2) = {out.witnessed_gamma2}")
    print(f"   under {out.satisfying_arrangement}")

    print(f"3. cardinality emptiness of t11 + t23: {combined_cardinality_emptiness(t1, t2)}")
    print(f"   oracle verdict: {oracle_decide_combined([eq(x, x)], t1, t2).verdict}")

    v = Var("v", SIGMA1)
    report = refute_strong_witness(t2.witness, eq(v, v), t2)
    print(f"4. the witness is not strong: {report.verdict}")
    print(f"   arrangement {report.counterexample.arrangement}")
    print(f"   {report.detail}")


if __name__ == "__main__":
    main()
