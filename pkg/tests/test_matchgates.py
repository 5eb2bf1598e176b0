from fractions import Fraction

from holantlab.gates import gate_signature
from holantlab.matchgates import (build_act_gate, build_dummy_gate, build_pass_matchgate, build_pre_matchgate,
                                  is_matchgate, matchgate_library, two_colouring, verify_matchgate)
from holantlab.signatures import all_inputs


def test_library_gates_certify():
    for build in (build_pass_matchgate, build_pre_matchgate, build_act_gate, build_dummy_gate):
        rep = verify_matchgate(build())
        assert rep.ok, rep.summary()
        assert rep.total == 2 ** rep_arity(build)


def rep_arity(build):
    return build().gate.arity


def test_pass_and_pre_are_planar_bipartite_matchgates():
    for build in (build_pass_matchgate, build_pre_matchgate):
        m = build()
        assert is_matchgate(m.gate)
        assert two_colouring(m.gate.graph) is not None


def test_weights_are_unit_or_half():
    for build in (build_pass_matchgate, build_pre_matchgate, build_act_gate):
        ws = {e.weight for e in build().gate.graph.edges.values()}
        assert ws <= {1, -1, Fraction(1, 2)}


def test_library_contents():
    lib = matchgate_library()
    assert {"PASS", "PRE"} <= set(lib)


def test_act_is_filtered_pre():
    act = gate_signature(build_act_gate().gate)
    pre = gate_signature(build_pre_matchgate().gate)
    for b in all_inputs(6):
        if sum(b[:4]) % 2:
            assert act(b) == 0
        else:
            assert act(b) == pre(b)
