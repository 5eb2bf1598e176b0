"""Hypothesis properties: algebraic laws, round trips, oracle equivalences."""

import random
from fractions import Fraction

from hypothesis import given, strategies as st

from holantlab import formats as F
from holantlab.generators import random_apex_graph, random_planar_graph, random_signature_graph
from holantlab.genus import cross_cap_sign_identity, genus_perfmatch, toroidal_grid_model
from holantlab.graph import holant, holant_enumerate
from holantlab.gridtiling import count_psub, count_tilings, count_tilings_naive, psub_to_gridtiling, random_instance, random_psub
from holantlab.linalg import determinant, pfaffian, perm_det_mod2_check, permanent, permanent_mod, permanent_naive
from holantlab.matching import EmbeddedGraph, perfmatch_apex, perfmatch_bruteforce, perfmatch_fkt
from holantlab.scalar import ModScalar, Scalar
from holantlab.signatures import bits_to_index, index_to_bits

rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))
scalars = st.builds(Scalar, rationals, rationals)
seeds = st.integers(0, 2 ** 32 - 1)


@given(scalars, scalars, scalars)
def test_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if not a.is_zero():
        assert a * (Scalar(1) / a) == 1


@given(scalars)
def test_scalar_json(a):
    assert F.decode_scalar(F.loads(F.dumps(F.encode_scalar(a)))) == a


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 6, 10 ** 6), st.integers(1, 40))
def test_mod_ring_homomorphism(a, b, m):
    M = 1 << m
    assert (ModScalar(a, m) + ModScalar(b, m)).value == (a + b) % M
    assert (ModScalar(a, m) * ModScalar(b, m)).value == (a * b) % M


@given(st.integers(0, 12).flatmap(lambda d: st.tuples(st.just(d), st.integers(0, 2 ** d - 1))))
def test_bit_index_bijection(di):
    d, i = di
    assert bits_to_index(index_to_bits(i, d)) == i


@given(st.integers(0, 3).flatmap(lambda h: st.lists(st.integers(-4, 4), min_size=h * (2 * h - 1),
                                                    max_size=h * (2 * h - 1)).map(lambda xs: (2 * h, xs))))
def test_pfaffian_squared_is_determinant(data):
    n, xs = data
    a = [[0] * n for _ in range(n)]
    it = iter(xs)
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j] = next(it)
            a[j][i] = -a[i][j]
    assert pfaffian(a) ** 2 == determinant(a)


@given(st.integers(0, 5).flatmap(lambda n: st.lists(st.lists(rationals, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_permanent_vs_naive(m):
    assert permanent(m) == permanent_naive(m)


@given(st.integers(1, 7).flatmap(lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                                                    min_size=n, max_size=n)), st.integers(1, 20))
def test_permanent_mod(m, k):
    assert permanent_mod(m, 1 << k) == permanent(m).re % (1 << k)
    assert perm_det_mod2_check([[x % 2 for x in row] for row in m])


@given(st.integers(0, 60))
def test_cross_cap_sign(h):
    assert cross_cap_sign_identity(h)


@given(seeds)
def test_contract_vs_enumerate(seed):
    rng = random.Random(seed)
    g, _ = random_signature_graph(rng, rng.randint(1, 5), 9, gaussian=True)
    assert holant(g) == holant_enumerate(g)


@given(seeds, st.integers(1, 6))
def test_fkt_vs_bruteforce(seed, half):
    rng = random.Random(seed)
    g = random_planar_graph(2 * half, rng, gaussian=seed % 2 == 1)
    assert perfmatch_fkt(g) == perfmatch_bruteforce(g)


@given(seeds, rationals.map(lambda q: q or Fraction(1)))
def test_perfmatch_scales_with_weights(seed, c):
    # every perfect matching of 2h vertices uses h edges
    rng = random.Random(seed)
    g = random_planar_graph(6, rng)
    h = EmbeddedGraph(g.vertices, [(u, v, w * c) for u, v, w in g.edges], g.rotation)
    assert perfmatch_fkt(h) == perfmatch_fkt(g) * Scalar(c) ** 3


@given(seeds)
def test_apex_vs_bruteforce(seed):
    rng = random.Random(seed)
    g, apices = random_apex_graph(rng.choice([4, 6]), rng.randint(1, 2), rng)
    assert perfmatch_apex(g, apices) == perfmatch_bruteforce(g)


@given(seeds)
def test_toroidal_grid_genus(seed):
    rng = random.Random(seed)
    r, c = rng.choice([(2, 2), (2, 3), (3, 2), (2, 4)])
    m = toroidal_grid_model(r, c, weight=lambda: Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
    assert genus_perfmatch(m).value == perfmatch_bruteforce(m.graph())


@given(seeds)
def test_tiling_counters(seed):
    rng = random.Random(seed)
    t = random_instance(rng, rng.randint(1, 2), rng.randint(1, 2))
    assert count_tilings(t) == count_tilings_naive(t)
    assert F.decode_instance(F.loads(F.dumps(F.encode_instance(t)))) == t


@given(seeds)
def test_psub_parsimony(seed):
    rng = random.Random(seed)
    p = random_psub(rng, rng.randint(1, 3), 3)
    assert count_psub(p) == count_tilings(psub_to_gridtiling(p))
