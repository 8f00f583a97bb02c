"""Parse a problem file, purify it and solve it in every applicable mode.

Each verdict is compared with the brute-force oracle.

    python3 demos/solve_problem_file.py demos/problems/purify_mixed.cmb
"""

import sys
from pathlib import Path

from combsmt.combiner import check_mode_applicability, combine, general, nelson_oppen, optimized, polite
from combsmt.errors import HypothesisViolation
from combsmt.oracle import oracle_decide_combined
from combsmt.problem import read_problem

DEFAULT = Path(__file__).resolve().parent / "problems" / "purify_mixed.cmb"


def candidate_modes(shared):
    yield nelson_oppen()
    yield polite()
    for s in sorted(shared):
        yield optimized({s})
        for case in (1, 2, 3):
            yield general(case, {s})


def main(path: Path) -> None:
    problem = read_problem(path)
    t1, t2 = problem.theories()
    pure = problem.purified()
    print(f"{path.name}: {t1} | {t2}")
    print(f"gamma1: {', '.join(map(str, pure.gamma1))}")
    print(f"gamma2: {', '.join(map(str, pure.gamma2))}")
    for var, term in pure.origin.items():
        print(f"  {var} abstracts {term}")
    truth = oracle_decide_combined(pure.gamma1 + pure.gamma2, t1, t2)
    print(f"oracle: {truth.verdict}")
    for mode in candidate_modes(pure.shared_sorts):
        try:
            check_mode_applicability(t1, t2, mode, pure.shared_sorts)
        except HypothesisViolation as e:
            print(f"  {str(mode):<24} not applicable ({e})")
            continue
        out = combine(pure, t1, t2, mode)
        print(f"  {str(mode):<24} {out.verdict:<6} {out.arrangements_examined}/{out.arrangements_total} arrangements")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT)
