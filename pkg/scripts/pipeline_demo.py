"""Tiling count via apex branches and parity via the Z/2^m combination.

usage: python3 scripts/pipeline_demo.py [SEED] [COUNT]
"""

import random
import sys

from holantlab.apex import verify_combined_gridtiling
from holantlab.gridtiling import HORIZONTAL, VERTICAL, count_tilings, random_balanced_instance
from holantlab.mod2k import modulo_combination_eval


def main(seed: int, count: int) -> int:
    rng = random.Random(seed)
    bad = 0
    for i in range(count):
        k = rng.randint(1, 2)
        cells = rng.randint(1, min(2, k * k))
        t = random_balanced_instance(rng, 2, k, cells, rng.randint(1, 2), VERTICAL)
        rep = verify_combined_gridtiling(t)
        u = random_balanced_instance(rng, 2, k, cells, rng.randint(1, 2), HORIZONTAL)
        parity, tr = modulo_combination_eval(u)
        want = count_tilings(u) % 2
        ok = rep.ok and parity == want
        bad += not ok
        print(f"#{i} apex: tilings={rep.lhs} combination={rep.rhs}  "
              f"mod2k: parity={parity} brute={want} sum={tr.total.value} M={tr.M}  {'ok' if ok else 'FAIL'}")
    return 1 if bad else 0


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:]]
    sys.exit(main(*(args + [0, 3][len(args):])))
