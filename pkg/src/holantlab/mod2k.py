"""Grid tiling parity through PerfMatch modulo 2^k.

Gamma(A) is Phi'(A) with PRE in place of ACT, so every weight is +-1.
Gamma_up(A) adds a dummy row above row 1 and below row n; each dummy is a
PRE vertex whose W and E edges are forced inactive by a pendant path, and
whose ports 5 and 6 go to the apices a1 and a2.  The difference
Sig(Gamma_up) - Sig(Gamma) is a discrete derivative of the polynomial
signature of Gamma, and (Sig(Gamma_up) - Sig(Gamma) - S Sig(Phi)) / 4
equals g_kappa for S = n - 2T - 2 under horizontal balance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .parallel import pmap
from .apex import (PHI_PRIME_APICES, _cell_skeleton, _dangling, build_cell_graph, build_phi,
                   build_phi_abstract, BalanceError)
from .gates import Gate, LinearCombination, flatten_gate, gate_signature, gate_value, insert_gate
from .graph import SignatureGraph, holant
from .gridtiling import GridTilingInstance, count_tilings
from .matchgates import matchgate_library
from .matching import from_signature_graph, perfmatch_apex
from .scalar import ModScalar, Scalar
from .signatures import HW1, PRE, CellSignature, one_hot_index, split_blocks

BASE = "BASE"
LIFTED = "LIFTED"


def horizontal_T(A, n: int) -> int:
    counts = {sum(1 for (a, _) in A if a == u) for u in range(1, n + 1)}
    if len(counts) != 1:
        raise BalanceError(f"A is not horizontally balanced: row counts {sorted(counts)}")
    return counts.pop()


# ---------------------------------------------------------------------------
# gates

def _add_dummy(g: SignatureGraph, name, north, south) -> None:
    """PRE vertex with W and E forced inactive by pendant HW=1 paths."""
    we = {side: (name, "edge", side) for side in "EW"}
    ports = [north, we["E"], south, we["W"]]
    g.add_vertex(name, PRE, ports + [("a1", name), ("a2", name)])
    g.rotation[name] = list(ports)
    for side, e in we.items():
        link = (name, "link", side)
        g1, g2 = (name, "g1", side), (name, "g2", side)
        g.add_vertex(g1, HW1(2), [e, link])
        g.add_vertex(g2, HW1(1), [link])
        g.rotation[g1] = [e, link]
        g.rotation[g2] = [link]
        g.add_edge(e, name, g1, 1, attach=False)
        g.add_edge(link, g1, g2, 1, attach=False)


def _retarget(g: SignatureGraph, v, old, new) -> None:
    g.inc[v] = [new if e == old else e for e in g.inc[v]]
    g.rotation[v] = [new if e == old else e for e in g.rotation[v]]


@lru_cache(maxsize=None)
def build_gamma_abstract(A: frozenset, n: int, variant: str = BASE) -> Gate:
    if variant not in (BASE, LIFTED):
        raise ValueError(f"unknown variant {variant!r}")
    A = frozenset(A)
    for (u, v) in A:
        if not (1 <= u <= n and 1 <= v <= n):
            raise BalanceError(f"{(u, v)} outside [n]^2")
    g = _cell_skeleton(n, A, special=PRE)
    apex_targets = [("b", u, v) for (u, v) in sorted(A)]
    if variant == LIFTED:
        for v in range(1, n + 1):
            top, bot = ("up", v), ("down", v)
            # top dummy: its south edge now feeds b(1, v); dN stays the port
            inner_top, inner_bot = ("upS", v), ("downN", v)
            _retarget(g, ("b", 1, v), ("dN", v), inner_top)
            _retarget(g, ("b", n, v), ("dS", v), inner_bot)
            g.edges.pop(("dN", v))
            g.edges.pop(("dS", v))
            _add_dummy(g, top, ("dN", v), inner_top)
            _add_dummy(g, bot, inner_bot, ("dS", v))
            g.add_edge(("dN", v), top, None, 1, attach=False)
            g.add_edge(inner_top, top, ("b", 1, v), 1, attach=False)
            g.add_edge(inner_bot, ("b", n, v), bot, 1, attach=False)
            g.add_edge(("dS", v), bot, None, 1, attach=False)
        apex_targets += [("up", v) for v in range(1, n + 1)] + [("down", v) for v in range(1, n + 1)]
    for a in PHI_PRIME_APICES:
        inc = [(a,) + tuple(b[1:]) if b[0] == "b" else (a, b) for b in apex_targets]
        g.add_vertex(a, HW1(len(inc)), inc)
        for e, b in zip(inc, apex_targets):
            g.add_edge(e, b, a, 1, attach=False)
    return Gate(g.check(), _dangling(n))


@lru_cache(maxsize=None)
def build_gamma(A: frozenset, n: int, variant: str = BASE) -> Gate:
    """Flat 2-apex matchgate Gamma(A) or Gamma_up(A) on weights {-1, 1}."""
    return flatten_gate(build_gamma_abstract(frozenset(A), n, variant), matchgate_library())


# ---------------------------------------------------------------------------
# polynomials

@dataclass
class PolyEnv:
    A: frozenset
    n: int
    alpha: dict
    beta: dict

    def q(self, u: int) -> int:
        return sum(self.alpha[u, z] * self.beta[u, z] - comb(self.alpha[u, z], 2) - comb(self.beta[u, z], 2)
                   for z in range(1, self.n + 1))

    def p(self, u: int, v: int, w: int) -> int:
        return (self.alpha[u, v] - self.beta[u, v]) * (self.beta[u, w] - self.alpha[u, w])

    def r(self, u: int, v: int) -> int:
        return sum(self.beta[u, z] for z in range(1, self.n + 1) if z != v and (u, z) in self.A)

    def s(self, u: int, v: int) -> int:
        return sum(self.alpha[u, z] for z in range(1, self.n + 1) if z != v and (u, z) in self.A)

    def wanted(self, u: int, v: int) -> int:
        base = self.q(u) - self.r(u, v) - self.s(u, v)
        if (u, v) in self.A:
            return base + 1
        return base - self.alpha[u, v] - self.beta[u, v]

    def unwanted(self, u: int, v: int, w: int) -> int:
        val = self.p(u, v, w)
        if (u, w) in self.A:
            val += self.alpha[u, v] - self.beta[u, v]
        if (u, v) in self.A:
            val += self.beta[u, w] - self.alpha[u, w]
        if (u, v) in self.A and (u, w) in self.A:
            val += 1
        return val

    def signature(self, x) -> int:
        """Sig(Gamma, x) for x satisfying phi_one."""
        n = self.n
        xN, xE, xS, xW = split_blocks(x, n)
        if xW != xE or sum(xS) != 1:
            return 0
        u, v, w = one_hot_index(xW), one_hot_index(xN), one_hot_index(xS)
        return self.wanted(u, v) if v == w else self.unwanted(u, v, w)


def poly_env(A, n: int, lifted: bool = False) -> PolyEnv:
    A = frozenset(A)
    shift = 1 if lifted else 0
    alpha, beta = {}, {}
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            alpha[u, v] = sum(1 for y in range(1, u) if (y, v) in A) + shift
            beta[u, v] = sum(1 for y in range(u + 1, n + 1) if (y, v) in A) + shift
    return PolyEnv(A, n, alpha, beta)


def derivative_expected(x, n: int, A, T: int) -> int:
    xN, xE, xS, xW = split_blocks(x, n)
    if xN != xS or xW != xE:
        return 0
    u, v = one_hot_index(xW), one_hot_index(xN)
    return n - 2 * T + 2 if (u, v) in A else n - 2 * T - 2


def derivative_signature(A, n: int, T: int | None = None, flat: bool = False, inputs=None) -> dict:
    """x -> Sig(Gamma_up, x) - Sig(Gamma, x) over phi_one inputs (or ``inputs``)."""
    from .signatures import phi_one_inputs
    A = frozenset(A)
    T0 = horizontal_T(A, n)
    if T is not None and T != T0:
        raise BalanceError(f"A has row count {T0}, expected {T}")
    build = build_gamma if flat else build_gamma_abstract
    up, base = build(A, n, LIFTED), build(A, n, BASE)
    xs = list(phi_one_inputs(n)) if inputs is None else inputs
    # one open contraction per gate is far cheaper than pinning each input
    sig_up, sig_base = gate_signature(up), gate_signature(base)
    return {x: sig_up(x) - sig_base(x) for x in xs}


def mod_combination(A, n: int, T: int | None = None, flat: bool = True) -> LinearCombination:
    """(Sig(Gamma_up) - Sig(Gamma) - S Sig(Phi)) / 4 with S = n - 2T - 2."""
    A = frozenset(A)
    T0 = horizontal_T(A, n)
    T = T0 if T is None else T
    S = n - 2 * T - 2
    if flat:
        up, base, phi = build_gamma(A, n, LIFTED), build_gamma(A, n, BASE), build_phi(n)
    else:
        up, base, phi = (build_gamma_abstract(A, n, LIFTED), build_gamma_abstract(A, n, BASE),
                         build_phi_abstract(n))
    q = Fraction(1, 4)
    return LinearCombination([(q, up), (-q, base), (-S * q, phi)], 4 * n,
                             CellSignature(n, "PROPAGATE_CHECK", A))


# ---------------------------------------------------------------------------
# branches and the modular sum

@dataclass
class ModBranch:
    omega: tuple
    d: int
    e: int
    coefficient: ModScalar
    perfmatch: int | None = None
    fkt_calls: int = 0


@dataclass
class ModTranscript:
    n: int
    T: int
    S: int
    C: list
    modulus_log: int
    M: int
    branches: list = field(default_factory=list)
    total: ModScalar | None = None

    def lines(self) -> list[str]:
        out = [f"n={self.n} T={self.T} S={self.S} |C|={len(self.C)} M={self.M} modulus=2^{self.modulus_log}"]
        for b in self.branches:
            out.append(f"omega={''.join(map(str, b.omega)) or '-'} d={b.d} e={b.e} "
                       f"coef={b.coefficient.value} perfmatch={b.perfmatch} fkt_calls={b.fkt_calls}")
        out.append(f"sum={self.total.value if self.total is not None else None}")
        return out


def instance_horizontal_T(t: GridTilingInstance) -> int:
    if not t.C:
        return 0
    T = t.horizontal_balance()
    if T is None:
        raise BalanceError("instance is not horizontally balanced")
    return T


def mod_branch_graphs(t: GridTilingInstance, abstract: bool = False):
    """Yield (omega, d, e, graph, apices) for omega : C -> {1, 2, 3}."""
    n = t.n
    C = sorted(t.C)
    cg = build_cell_graph(t)
    phi = build_phi_abstract(n) if abstract else build_phi(n)
    build = build_gamma_abstract if abstract else build_gamma
    for omega in itertools.product((1, 2, 3), repeat=len(C)):
        choice = dict(zip(C, omega))
        g = cg.graph
        apices = []
        for (_, i, j) in cg.cells:
            c = ("c", i, j)
            w = choice.get((i, j), 3)
            if w == 3:
                g = insert_gate(g, c, phi)
            else:
                A = frozenset(t.T[(i, j)])
                g = insert_gate(g, c, build(A, n, LIFTED if w == 1 else BASE))
                apices += [(c, a) for a in PHI_PRIME_APICES]
        d = sum(1 for w in omega if w == 2)
        e = sum(1 for w in omega if w == 3)
        yield omega, d, e, g, apices


class ModularInvariantError(ArithmeticError):
    pass


def _mod_branch_value(item):
    omega, g, apices, abstract = item
    stats: dict = {}
    if abstract:
        pm = holant(g)
    else:
        weights = {ed.weight for ed in g.edges.values()}
        if not weights <= {Scalar(1), Scalar(-1)}:
            raise ModularInvariantError(f"branch {omega} has weights outside {{-1, 1}}: {weights}")
        pm = perfmatch_apex(from_signature_graph(g), apices, stats)
    if pm.im != 0 or pm.re.denominator != 1:
        raise ModularInvariantError(f"branch {omega} has non-integral value {pm}")
    return pm.re.numerator, stats.get("fkt_calls", 0)


def modulo_combination_eval(t: GridTilingInstance, modulus_log: int | None = None,
                            abstract: bool = False, emit=None, jobs: int = 1) -> tuple[int, ModTranscript]:
    """Parity of the tiling count from sum_omega (-1)^d (-S)^e PerfMatch(H_omega) in Z/2M."""
    T = instance_horizontal_T(t)
    n = t.n
    S = n - 2 * T - 2
    c = len(t.C)
    M = 1 << (2 * c)
    mlog = 2 * c + 1 if modulus_log is None else modulus_log
    if mlog < 2 * c + 1:
        raise ValueError(f"modulus 2^{mlog} is too small; need at least 2^{2 * c + 1}")
    tr = ModTranscript(n, T, S, sorted(t.C), mlog, M)
    branches = list(mod_branch_graphs(t, abstract))
    if emit is not None:
        for omega, d, e, g, apices in branches:
            emit(omega, g, apices)
    values = pmap(_mod_branch_value, [(omega, g, apices, abstract) for omega, _, _, g, apices in branches], jobs)
    total = ModScalar(0, mlog)
    for (omega, d, e, _, _), (pm_int, calls) in zip(branches, values):
        coef = ModScalar((-1) ** d, mlog) * ModScalar(-S, mlog) ** e
        tr.branches.append(ModBranch(omega, d, e, coef, pm_int, calls))
        total = total + coef * ModScalar(pm_int, mlog)
    tr.total = total
    # reduce to Z/2M for the readout
    readout = total.value % (2 * M)
    if readout not in (0, M):
        raise ModularInvariantError(f"sum {readout} mod {2 * M} is neither 0 nor M={M}")
    return int(readout == M), tr


def mod_ring_demo(a: int, b: int, m: int) -> dict:
    x, y = ModScalar(a, m), ModScalar(b, m)
    return {"sum": x + y, "difference": x - y, "product": x * y, "power": x ** b,
            "two_to_m": ModScalar(2, m) ** m}
