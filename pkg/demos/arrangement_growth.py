"""How many arrangements each mode examines on the lists family.

Polite combination arranges every integer the list side mentions, so its
search space grows with the Bell numbers.  The optimized mode only shares
the variables both sides mention on the stably infinite sort int and stays
at two arrangements.

    python3 demos/arrangement_growth.py [max_n]
"""

import sys
import time

from combsmt.arrangements import bell
from combsmt.bench import lists_instance
from combsmt.combiner import combine, optimized, polite
from combsmt.theories import INT


def main(max_n: int = 6) -> None:
    print(f"{'n':>2} {'polite':>8} {'B(n+1)*B(2)':>12} {'optimized':>10} {'polite ms':>10} {'opt ms':>8}")
    for n in range(1, max_n + 1):
        problem = lists_instance(n)
        t1, t2 = problem.theories()
        pure = problem.purified()
        row = []
        for mode in (polite(), optimized({INT})):
            start = time.perf_counter()
            out = combine(pure, t1, t2, mode)
            row.append((out.arrangements_total, (time.perf_counter() - start) * 1000, out.verdict))
        (pt, pms, pv), (ot, oms, ov) = row
        assert pv == ov == "sat"
        print(f"{n:>2} {pt:>8} {bell(n + 1) * bell(2):>12} {ot:>10} {pms:>10.1f} {oms:>8.1f}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 6)
