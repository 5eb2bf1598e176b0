import random
from fractions import Fraction

import pytest

from holantlab.apex import (BalanceError, apex_branch_graphs, apex_edges_unit, apices_independent,
                            branch_is_planar_minus_apices, cell_graph_holant, cell_order, evaluate_combination,
                            g_combination, verify_combined_gridtiling)
from holantlab.gridtiling import (HORIZONTAL, VERTICAL, GridTilingInstance, count_tilings,
                                  random_balanced_instance)
from holantlab.mod2k import (ModularInvariantError, horizontal_T, mod_branch_graphs, mod_combination,
                             mod_ring_demo, modulo_combination_eval)
from holantlab.signatures import CellSignature, phi_one_inputs

from fixtures import BUNDLED_INSTANCES


def test_cell_order():
    assert cell_order(2) == [1, 2, 3, 4, 6, 5, 8, 7]


def test_cell_graph_counts_tilings():
    for t in BUNDLED_INSTANCES.values():
        assert cell_graph_holant(t) == count_tilings(t)


def test_g_combination_matches_cell_signature():
    rng = random.Random(6)
    from holantlab.gridtiling import random_balanced_set
    for n in (1, 2):
        for T in range(1, n + 1):
            A = frozenset(random_balanced_set(rng, n, T, VERTICAL))
            lc = g_combination(A, n, T, flat=False)
            g = CellSignature(n, "PROPAGATE_CHECK", A)
            for x in phi_one_inputs(n):
                assert evaluate_combination(lc, x) == g(x)


def test_apex_branch_structure():
    t = BUNDLED_INSTANCES["fixture_n2k2_c1"]
    branches = list(apex_branch_graphs(t))
    assert len(branches) == 2 ** len(t.C)
    for br in branches:
        assert apex_edges_unit(br)
        assert apices_independent(br)
        assert branch_is_planar_minus_apices(br)
        assert len(br.apices) == 2 * sum(1 for w in br.omega if w == 2)


def test_apex_abstract_and_flattened_agree():
    t = BUNDLED_INSTANCES["fixture_even"]
    assert verify_combined_gridtiling(t).rhs == verify_combined_gridtiling(t, abstract=True).rhs


def test_apex_requires_vertical_balance():
    t = GridTilingInstance(2, 1, {(1, 1)}, {(1, 1): {(1, 1), (2, 1), (1, 2)}})
    with pytest.raises(BalanceError):
        verify_combined_gridtiling(t)


def test_apex_emit_and_jobs():
    t = BUNDLED_INSTANCES["fixture_odd"]
    seen = []
    rep = verify_combined_gridtiling(t, emit=seen.append, jobs=2)
    assert rep.ok and len(seen) == 2


def test_mod_combination_is_propagate_check():
    rng = random.Random(7)
    from holantlab.gridtiling import random_balanced_set
    for n in (1, 2):
        for T in range(0, n + 1):
            A = frozenset(random_balanced_set(rng, n, T, HORIZONTAL))
            lc = mod_combination(A, n, T, flat=False)
            g = CellSignature(n, "PROPAGATE_CHECK", A)
            for x in phi_one_inputs(n):
                assert evaluate_combination(lc, x) == g(x)


def test_horizontal_T():
    assert horizontal_T({(1, 1), (2, 2)}, 2) == 1
    with pytest.raises(BalanceError):
        horizontal_T({(1, 1), (1, 2)}, 2)


def test_mod2k_fixtures_and_transcript():
    for name, t in BUNDLED_INSTANCES.items():
        parity, tr = modulo_combination_eval(t)
        assert parity == count_tilings(t) % 2
        assert tr.modulus_log == 2 * len(t.C) + 1
        assert tr.lines()


def test_mod2k_modulus_checks():
    t = BUNDLED_INSTANCES["fixture_odd"]
    with pytest.raises(ValueError):
        modulo_combination_eval(t, modulus_log=1)
    assert modulo_combination_eval(t, modulus_log=10)[0] == 1


def test_mod2k_abstract_agrees():
    t = BUNDLED_INSTANCES["fixture_odd"]
    assert modulo_combination_eval(t, abstract=True)[1].total == modulo_combination_eval(t)[1].total


def test_mod2k_branch_weights_are_signs():
    t = BUNDLED_INSTANCES["fixture_n2k2_c1"]
    for _, _, _, g, _ in mod_branch_graphs(t):
        assert {ed.weight for ed in g.edges.values()} <= {1, -1}


def test_ring_demo():
    r = mod_ring_demo(5, 6, 3)
    assert r["sum"] == 3 and r["product"] == 6 and r["two_to_m"] == 0


def test_invariant_error_is_arithmetic():
    assert issubclass(ModularInvariantError, ArithmeticError)
