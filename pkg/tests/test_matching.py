import itertools
import random

import pytest

from holantlab import matching
from holantlab.generators import grid_graph, random_apex_graph, random_planar_graph
from holantlab.linalg import determinant, pfaffian
from holantlab.matching import (EmbeddedGraph, EmbeddingError, find_perfect_matching,
                                pairing_sign, perfmatch_apex, perfmatch_bruteforce, perfmatch_fkt,
                                pfaffian_orientation, skew_matrix)


def k4():
    # planar rotation of K4 with vertex 3 in the middle of triangle 0,1,2
    edges = [(0, 1, 1), (1, 2, 1), (2, 0, 1), (0, 3, 1), (1, 3, 1), (2, 3, 1)]
    rot = {0: [0, 3, 2], 1: [1, 4, 0], 2: [2, 5, 1], 3: [3, 4, 5]}
    return EmbeddedGraph([0, 1, 2, 3], edges, rot)


def test_k4_has_three_matchings():
    assert perfmatch_fkt(k4()) == 3 == perfmatch_bruteforce(k4())


def test_grid_domino_counts():
    # domino tilings: 2x2 -> 2, 2x3 -> 3, 4x4 -> 36, 6x6 -> 6728
    for (r, c), want in {(2, 2): 2, (2, 3): 3, (4, 4): 36, (6, 6): 6728}.items():
        assert perfmatch_fkt(grid_graph(r, c)) == want


def test_odd_graph_has_no_matching():
    g = grid_graph(3, 3)
    assert perfmatch_fkt(g) == 0


def test_orientation_is_pfaffian():
    # unit weights: every perfect matching contributes the same sign
    rng = random.Random(8)
    for _ in range(20):
        g = random_planar_graph(rng.choice([4, 6, 8, 10]), rng, unit=True)
        a, _ = skew_matrix(g, pfaffian_orientation(g))
        pf = pfaffian(a)
        assert pf * pf == determinant(a)
        assert pf in (perfmatch_bruteforce(g), -perfmatch_bruteforce(g))


def test_pairing_sign():
    assert pairing_sign([(0, 1), (2, 3)]) == 1
    assert pairing_sign([(0, 2), (1, 3)]) == -1
    assert pairing_sign([(0, 3), (1, 2)]) == 1


def test_find_perfect_matching():
    es = [(0, 1, 1), (1, 2, 1), (2, 3, 1)]
    m = find_perfect_matching([0, 1, 2, 3], es)
    assert sorted(m) == [0, 2]
    assert find_perfect_matching([0, 1, 2], [(0, 1, 1), (1, 2, 1)]) is None


def test_non_planar_rotation_rejected():
    k33_edges = [(a, b, 1) for a in range(3) for b in range(3, 6)]
    rot = {v: [i for i, e in enumerate(k33_edges) if v in e[:2]] for v in range(6)}
    g = EmbeddedGraph(list(range(6)), k33_edges, rot)
    with pytest.raises(EmbeddingError):
        perfmatch_fkt(g)


def test_apex_matches_bruteforce():
    rng = random.Random(12)
    for _ in range(15):
        g, apices = random_apex_graph(rng.choice([4, 6, 8]), rng.randint(1, 2), rng, gaussian=True)
        assert perfmatch_apex(g, apices) == perfmatch_bruteforce(g)


def test_stats_count_calls():
    before = matching.STATS.calls
    perfmatch_fkt(k4())
    assert matching.STATS.calls == before + 1


def test_modular_path_on_large_grid():
    # beyond the Fraction threshold: multimodular elimination; 8x8 domino count
    assert perfmatch_fkt(grid_graph(8, 8)) == 12988816
