import random

import pytest

from holantlab import matching
from holantlab.gates import Gate, gate_signature
from holantlab.generators import random_weight
from holantlab.genus import (PLUS_KLEIN, PLUS_PROJECTIVE, ORIENTABLE, CapExpansion, PlaneModelError,
                             apply_expansion, build_cross_cap_gate, build_grated_cross_cap_gate,
                             build_grid_cap_gate, caps_sides, cross_cap_crossing, cross_cap_expansion,
                             cross_cap_sign_identity, genus_perfmatch, grated_cross_cap_expansion,
                             grated_target, grid_cap_crossing, grid_cap_expansion, grid_cap_target, k33_model,
                             random_plane_model, toroidal_grid_model)
from holantlab.matching import perfmatch_bruteforce
from holantlab.scalar import Scalar
from holantlab.signatures import all_inputs


@pytest.mark.parametrize("d1,d2", [(1, 1), (1, 2), (2, 2), (2, 3)])
def test_grid_cap_gate_is_planar_crossing(d1, d2):
    gate = build_grid_cap_gate(d1, d2)
    assert gate.is_planar()
    sig = gate_signature(gate)
    for b in all_inputs(2 * (d1 + d2)):
        assert sig(b) == grid_cap_crossing(b, d1, d2)


@pytest.mark.parametrize("d1,d2", [(1, 1), (2, 1), (2, 2)])
def test_grid_cap_expansion_recovers_target(d1, d2):
    table = gate_signature(build_grid_cap_gate(d1, d2))
    got = apply_expansion(grid_cap_expansion(), table, [d1, d2, 0, 0])
    assert got == [grid_cap_target(b, d1, d2) for b in all_inputs(2 * (d1 + d2))]


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_cross_cap_gate(d):
    gate = build_cross_cap_gate(d)
    assert gate.is_planar()
    sig = gate_signature(gate)
    for b in all_inputs(2 * d):
        assert sig(b) == cross_cap_crossing(b, d)
    got = apply_expansion(cross_cap_expansion(), sig, [d, 0])
    assert got == [int(b[:d] == b[d:]) for b in all_inputs(2 * d)]


def test_cross_cap_sign_identity():
    assert all(cross_cap_sign_identity(h) for h in range(12))


@pytest.mark.parametrize("sizes", [[1], [1, 1], [2, 1], [1, 2, 1]])
def test_grated_cross_cap(sizes):
    exp = grated_cross_cap_expansion(len(sizes), sizes)
    assert len(exp) == 2 ** len(sizes)
    table = gate_signature(build_grated_cross_cap_gate(sizes))
    got = apply_expansion(exp, table, list(sizes) + [0] * len(sizes))
    assert got == [grated_target(b, sizes) for b in all_inputs(2 * sum(sizes))]


def test_single_bunch_grated_is_identity():
    exp = grated_cross_cap_expansion(1)
    assert [(c, f) for c, f in exp.terms] == [(Scalar(1), (1,)), (Scalar(0), (-1,))]


def test_three_cross_caps_are_not_a_normal_form():
    with pytest.raises(ValueError):
        caps_sides(0, 3)


def test_caps_sides_patterns():
    assert caps_sides(1, 0)[1] == ORIENTABLE
    assert caps_sides(0, 1)[1] == PLUS_PROJECTIVE
    assert caps_sides(0, 2)[1] == PLUS_KLEIN
    sides, _ = caps_sides(1, 0)
    assert len(sides) == 4


def test_k33_models():
    for surface, calls in (("torus", 4), ("projective", 2)):
        m = k33_model(surface)
        m.check()
        res = genus_perfmatch(m)
        assert res.value == 6
        assert res.constituents == res.fkt_calls == calls
        assert perfmatch_bruteforce(m.graph()) == 6


def test_toroidal_grid_exact():
    m = toroidal_grid_model(3, 4)
    assert genus_perfmatch(m).value == perfmatch_bruteforce(m.graph()) == 50


def test_gaussian_toroidal_grid():
    rng = random.Random(4)
    m = toroidal_grid_model(2, 4, weight=lambda: random_weight(rng, gaussian=True))
    assert genus_perfmatch(m).value == perfmatch_bruteforce(m.graph())


@pytest.mark.parametrize("handles,crosscaps", [(1, 0), (0, 1), (0, 2), (1, 1), (2, 0), (1, 2)])
def test_random_models_match_bruteforce(handles, crosscaps):
    rng = random.Random(100 * handles + crosscaps)
    for _ in range(3):
        m = random_plane_model(rng, 6, handles, crosscaps)
        res = genus_perfmatch(m)
        assert res.constituents == 4 ** handles * 2 ** crosscaps
        assert res.value == perfmatch_bruteforce(m.graph())
        assert res.value.im == 0


def test_terms_sum_to_value():
    res = genus_perfmatch(k33_model("torus"))
    total = Scalar(0)
    for _, coef, pm in res.terms:
        total = total + coef * pm
    assert total == res.value


def test_invalid_model_rejected():
    m = k33_model("torus")
    m.rotation = {v: list(reversed(r)) if i == 0 else r for i, (v, r) in enumerate(m.rotation.items())}
    with pytest.raises(PlaneModelError):
        m.check()


def test_jobs_do_not_change_result():
    m = toroidal_grid_model(2, 3)
    assert genus_perfmatch(m, jobs=2).value == genus_perfmatch(m).value
