import random

import pytest

from holantlab.graph import BudgetExceeded
from holantlab.gridtiling import (HORIZONTAL, VERTICAL, ColoredGraph, GridTilingInstance, PartitionedSubInstance,
                                  balance, balance_preserves_tilings, clique_to_psub, count_cliques, count_psub,
                                  count_tilings, count_tilings_naive, iter_tilings, parity_tilings,
                                  psub_to_gridtiling, random_balanced_instance, random_instance, random_psub)

from fixtures import BUNDLED_INSTANCES


def test_fixture_counts():
    assert count_tilings(BUNDLED_INSTANCES["fixture_odd"]) == 3
    assert count_tilings(BUNDLED_INSTANCES["fixture_even"]) == 2
    assert parity_tilings(BUNDLED_INSTANCES["fixture_odd"]) == 1


def test_counters_agree():
    rng = random.Random(1)
    for _ in range(40):
        t = random_instance(rng, rng.randint(1, 2), rng.randint(1, 2))
        c = count_tilings(t)
        assert c == count_tilings_naive(t) == sum(1 for _ in iter_tilings(t))


def test_empty_C_counts_everything():
    t = GridTilingInstance(3, 2, frozenset(), {})
    assert count_tilings(t) == 3 ** 4


def test_instance_validation():
    with pytest.raises(ValueError):
        GridTilingInstance(2, 1, {(1, 1)}, {(1, 1): {(3, 1)}})
    with pytest.raises(ValueError):
        GridTilingInstance(2, 1, {(2, 1)}, {})
    with pytest.raises(ValueError):
        GridTilingInstance(2, 1, set(), {(1, 1): set()})


def test_budget():
    t = GridTilingInstance(5, 3, frozenset(), {})
    with pytest.raises(BudgetExceeded):
        count_tilings(t, budget=10)


def test_balanced_generators():
    rng = random.Random(2)
    for _ in range(20):
        T = rng.randint(1, 3)
        t = random_balanced_instance(rng, 3, 2, 2, T, VERTICAL)
        assert t.vertical_balance() == T
        t = random_balanced_instance(rng, 3, 2, 2, T, HORIZONTAL)
        assert t.horizontal_balance() == T


def test_balance_pads_columns():
    rng = random.Random(3)
    for _ in range(30):
        t = random_instance(rng, 2, 2, cells=4, density=0.6)
        if not all(t.T[c] for c in t.C):
            continue
        b, T = balance(t, VERTICAL)
        assert all(b.column_count(c, v) == T for c in b.C for v in range(1, t.n + 1))
        if balance_preserves_tilings(t, VERTICAL) and b.n <= 6:
            assert count_tilings(b) == count_tilings(t)


def test_psub_reduction_small():
    H = ColoredGraph([1, 2], {1: 1, 2: 2}, [(1, 2)])
    G = ColoredGraph(["a", "b", "c"], {"a": 1, "b": 2, "c": 2}, [("a", "b"), ("a", "c")])
    p = PartitionedSubInstance(H, G)
    assert count_psub(p) == 2 == count_tilings(psub_to_gridtiling(p))


def test_psub_needs_colourful_H():
    with pytest.raises(ValueError):
        PartitionedSubInstance(ColoredGraph([1, 2], {1: 1, 2: 1}, []), ColoredGraph([], {}, []))


def test_psub_parsimonious_random():
    rng = random.Random(4)
    for _ in range(20):
        p = random_psub(rng, rng.randint(1, 3), 3)
        assert count_psub(p) == count_tilings(psub_to_gridtiling(p))


def test_clique_chain():
    k5 = (list(range(5)), [(a, b) for a in range(5) for b in range(a + 1, 5)])
    assert count_cliques(k5, 3) == 10
    p, mult = clique_to_psub(k5, 3)
    assert mult == 6
    assert count_psub(p) == 60
