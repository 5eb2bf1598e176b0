import itertools
import random

import pytest

from holantlab.gates import Gate, LinearCombination, expand_combination, gate_signature, gate_value, insert_gate
from holantlab.generators import random_gate, random_signature_graph
from holantlab.graph import (BudgetExceeded, GraphError, SignatureGraph, contract, euler_genus, holant,
                             holant_enumerate, perfmatch_via_holant, weighted_graph_to_signature_graph)
from holantlab.scalar import Scalar
from holantlab.signatures import (HW1, PASS, ArityError, Builtin, DenseTable, all_inputs, bits_to_index,
                                  index_to_bits, parse_bits, phi_one, phi_one_inputs, signature_equal)


def test_bits_are_big_endian():
    assert bits_to_index((1, 0, 0)) == 4
    assert index_to_bits(1, 3) == (0, 0, 1)
    assert parse_bits("0110") == (0, 1, 1, 0)


def test_builtin_tables():
    assert [HW1(3)(b) for b in all_inputs(3)] == [0, 1, 1, 0, 1, 0, 0, 0]
    assert sum(1 for _ in Builtin("EVEN", 4).support()) == 8
    with pytest.raises(ArityError):
        Builtin("PASS", 3)
    with pytest.raises(ValueError):
        Builtin("NOPE", 2)


def test_pass_builtin():
    # opposite ports agree; the full crossing carries the sign -1
    for b in all_inputs(4):
        want = int(b[0] == b[2] and b[1] == b[3])
        assert PASS(b) == (-1 if b == (1, 1, 1, 1) else want)


def test_phi_one_inputs_are_one_hot():
    for n in (1, 2, 3):
        xs = list(phi_one_inputs(n))
        assert len(xs) == n * n * 4 ** n == len(set(xs))
        assert all(phi_one(x, n) for x in xs)


def test_perfmatch_via_holant_triangle_plus_edge():
    # K4: 3 perfect matchings
    vs = range(4)
    es = [(u, v, 1) for u, v in itertools.combinations(vs, 2)]
    assert perfmatch_via_holant(vs, es) == 3
    assert perfmatch_via_holant(vs, es, method="enumerate") == 3


def test_self_loop_is_one_bit():
    g = SignatureGraph()
    g.add_vertex("v", DenseTable((Scalar(0), Scalar(5))))
    g.add_edge("e", "v", "v", weight=2)
    g.set_incidence("v", ["e"])
    assert holant(g) == 10 == holant_enumerate(g)


def test_enumerate_budget():
    g, _ = random_signature_graph(random.Random(0), 4, 10)
    with pytest.raises(BudgetExceeded):
        holant_enumerate(g, budget=0)


def test_contract_matches_enumerate_random():
    rng = random.Random(3)
    for _ in range(30):
        g, _ = random_signature_graph(rng, rng.randint(1, 5), 8, gaussian=True)
        assert holant(g) == holant_enumerate(g)


def test_gate_signature_vs_pinning():
    rng = random.Random(5)
    for _ in range(10):
        gate = random_gate(rng, rng.randint(1, 4))
        sig = gate_signature(gate)
        for b in all_inputs(gate.arity):
            assert sig(b) == gate_value(gate, b)


def test_single_vertex_gate():
    gate = Gate.single_vertex(HW1(3))
    assert signature_equal(gate_signature(gate), HW1(3))


def test_insert_gate_rejects_wrong_arity():
    rng = random.Random(9)
    host, _ = random_signature_graph(rng, 3, 6)
    v = next(u for u in host.sig if host.degree(u) >= 1)
    with pytest.raises((ArityError, GraphError)):
        insert_gate(host, v, random_gate(rng, host.degree(v) + 1))


def test_linear_combination_signature():
    lc = LinearCombination([(2, HW1(2)), (-1, Builtin("EVEN", 2))], 2)
    assert [lc.evaluate(b) for b in all_inputs(2)] == [-1, 2, 2, -1]
    assert [lc.signature()(b) for b in all_inputs(2)] == [-1, 2, 2, -1]


def test_expand_combination_branch_count():
    rng = random.Random(11)
    host, _ = random_signature_graph(rng, 4, 8)
    sites = [v for v in host.sig if host.degree(v) >= 1][:2]
    plan = [(s, LinearCombination([(1, random_gate(rng, host.degree(s))), (3, random_gate(rng, host.degree(s)))],
                                  host.degree(s))) for s in sites]
    assert len(expand_combination(host, plan)) == 2 ** len(sites)


def test_euler_genus_of_k4_embedding():
    # K4 drawn planar: every rotation consistent with a planar drawing
    g = weighted_graph_to_signature_graph(range(4), [(u, v, 1) for u, v in itertools.combinations(range(4), 2)])
    assert holant(g) == 3
