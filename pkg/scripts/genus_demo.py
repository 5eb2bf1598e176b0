"""PerfMatch on the torus and projective plane, checked against brute force.

usage: python3 scripts/genus_demo.py [SEED]
"""

import random
import sys

from holantlab.genus import genus_perfmatch, k33_model, random_plane_model, toroidal_grid_model
from holantlab.matching import perfmatch_bruteforce


def show(model):
    res = genus_perfmatch(model)
    brute = perfmatch_bruteforce(model.graph())
    mark = "ok" if res.value == brute else "MISMATCH"
    print(f"{model.name:24} value={res.value} brute={brute} constituents={res.constituents} {mark}")
    return res.value == brute


def main(seed: int) -> int:
    rng = random.Random(seed)
    models = [k33_model("torus"), k33_model("projective"), toroidal_grid_model(3, 4)]
    for h, c in [(1, 0), (0, 1), (0, 2), (1, 1), (2, 0)]:
        models.append(random_plane_model(rng, 6, h, c))
    return 0 if all([show(m) for m in models]) else 1


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 0))
