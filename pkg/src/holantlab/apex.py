"""Grid tiling to k-apex PerfMatch: the cell graph G(A), the cell gates
Phi and Phi'(A), and the branch graphs H_omega.

Layout conventions
------------------
Cells are ``("c", i, j)`` and border vertices ``("B", side, i)``.  Vertical
bundle edges are ``("v", i, j, m)`` joining cell (i, j) to (i + 1, j), with
row 0 and row k+1 standing for the N and S borders.  Horizontal bundle
edges are ``("h", i, j, m)`` joining (i, j) to (i, j + 1) likewise.  A cell
lists its edges as N1..Nn, E1..En, S1..Sn, W1..Wn; clockwise it sees
N1..Nn, E1..En, Sn..S1, Wn..W1.

Inside a cell gate, b(u, v) sits in row u and column v; row u carries the
western index u, column v the northern index v.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .parallel import pmap
from .gates import Gate, LinearCombination, flatten_gate, gate_value, insert_gate
from .graph import GraphError, SignatureGraph, contract, holant, is_planar_rotation
from .gridtiling import GridTilingInstance, count_tilings
from .matchgates import matchgate_library, two_colouring
from .matching import EmbeddedGraph, from_signature_graph, perfmatch_apex
from .scalar import Scalar
from .signatures import ACT, HW1, PASS, CellSignature, cell_input, phi_one_inputs, phi_prop


class BalanceError(ValueError):
    pass


def cell_order(n: int) -> list[int]:
    """Clockwise order of the 4n cell ports as 1-based labels."""
    N = list(range(1, n + 1))
    E = list(range(n + 1, 2 * n + 1))
    S = list(range(3 * n, 2 * n, -1))
    W = list(range(4 * n, 3 * n, -1))
    return N + E + S + W


# ---------------------------------------------------------------------------
# cell graph G(A)

@dataclass
class CellGraph:
    instance: GridTilingInstance
    graph: SignatureGraph
    cells: list = field(default_factory=list)
    borders: list = field(default_factory=list)


def _vedge(i, j, m):
    return ("v", i, j, m)


def _hedge(i, j, m):
    return ("h", i, j, m)


def cell_incidence(i: int, j: int, n: int) -> list:
    r = range(1, n + 1)
    return ([_vedge(i - 1, j, m) for m in r] + [_hedge(i, j, m) for m in r]
            + [_vedge(i, j, m) for m in r] + [_hedge(i, j - 1, m) for m in r])


def build_cell_graph(t: GridTilingInstance, signatures: dict | None = None) -> CellGraph:
    """G(A) with lazy cell signatures (f at cells outside C, g_kappa on C).

    ``signatures`` may override the signature of individual cells.
    """
    n, k = t.n, t.k
    g = SignatureGraph()
    cells, borders = [], []
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            c = ("c", i, j)
            if signatures and (i, j) in signatures:
                sig = signatures[(i, j)]
            elif (i, j) in t.C:
                sig = CellSignature(n, "PROPAGATE_CHECK", t.T[(i, j)])
            else:
                sig = CellSignature(n, "PROPAGATE")
            inc = cell_incidence(i, j, n)
            g.add_vertex(c, sig, inc)
            g.rotation[c] = [inc[p - 1] for p in cell_order(n)]
            cells.append(c)
    r = list(range(1, n + 1))
    for j in range(1, k + 1):
        top, bot = ("B", "N", j), ("B", "S", j)
        g.add_vertex(top, HW1(n), [_vedge(0, j, m) for m in r])
        g.rotation[top] = [_vedge(0, j, m) for m in reversed(r)]
        g.add_vertex(bot, HW1(n), [_vedge(k, j, m) for m in r])
        g.rotation[bot] = [_vedge(k, j, m) for m in r]
        borders += [top, bot]
    for i in range(1, k + 1):
        left, right = ("B", "W", i), ("B", "E", i)
        g.add_vertex(left, HW1(n), [_hedge(i, 0, m) for m in r])
        g.rotation[left] = [_hedge(i, 0, m) for m in r]
        g.add_vertex(right, HW1(n), [_hedge(i, k, m) for m in r])
        g.rotation[right] = [_hedge(i, k, m) for m in reversed(r)]
        borders += [left, right]
    for i in range(0, k + 1):
        for j in range(1, k + 1):
            u = ("B", "N", j) if i == 0 else ("c", i, j)
            v = ("B", "S", j) if i == k else ("c", i + 1, j)
            for m in r:
                g.add_edge(_vedge(i, j, m), u, v, 1, attach=False)
    for i in range(1, k + 1):
        for j in range(0, k + 1):
            u = ("B", "W", i) if j == 0 else ("c", i, j)
            v = ("B", "E", i) if j == k else ("c", i, j + 1)
            for m in r:
                g.add_edge(_hedge(i, j, m), u, v, 1, attach=False)
    g.check()
    return CellGraph(t, g, cells, borders)


def cell_graph_census(t: GridTilingInstance) -> tuple[int, int]:
    k, n = t.k, t.n
    return k * k + 4 * k, n * (2 * k * (k - 1) + 4 * k)


def cell_graph_holant(t: GridTilingInstance) -> Scalar:
    return holant(build_cell_graph(t).graph)


# ---------------------------------------------------------------------------
# cell gates

def _grid_edge(direction: str, u: int, v: int, n: int):
    """Edge ids inside a cell gate; boundary edges become dangling ports."""
    if direction == "v":
        if u == 0:
            return ("dN", v)
        if u == n:
            return ("dS", v)
        return ("gv", u, v)
    if v == 0:
        return ("dW", u)
    if v == n:
        return ("dE", u)
    return ("gh", u, v)


def _cell_skeleton(n: int, act: frozenset, special=ACT) -> SignatureGraph:
    g = SignatureGraph()
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            ports = [_grid_edge("v", u - 1, v, n), _grid_edge("h", u, v, n),
                     _grid_edge("v", u, v, n), _grid_edge("h", u, v - 1, n)]
            b = ("b", u, v)
            if (u, v) in act:
                g.add_vertex(b, special, ports + [("a1", u, v), ("a2", u, v)])
            else:
                g.add_vertex(b, PASS, ports)
            g.rotation[b] = list(ports)
    for u in range(0, n + 1):
        for v in range(1, n + 1):
            e = _grid_edge("v", u, v, n)
            g.add_edge(e, ("b", u, v) if u else ("b", 1, v), ("b", u + 1, v) if 0 < u < n else None,
                       1, attach=False)
    for u in range(1, n + 1):
        for v in range(0, n + 1):
            e = _grid_edge("h", u, v, n)
            g.add_edge(e, ("b", u, v) if v else ("b", u, 1), ("b", u, v + 1) if 0 < v < n else None,
                       1, attach=False)
    return g


def _dangling(n: int) -> tuple:
    r = range(1, n + 1)
    return tuple([("dN", v) for v in r] + [("dE", u) for u in r]
                 + [("dS", v) for v in r] + [("dW", u) for u in r])


@lru_cache(maxsize=None)
def build_phi_abstract(n: int) -> Gate:
    g = _cell_skeleton(n, frozenset())
    g.add_vertex("m1", HW1(1), ["minus"])
    g.add_vertex("m2", HW1(1), ["minus"])
    g.rotation["m1"] = ["minus"]
    g.rotation["m2"] = ["minus"]
    g.add_edge("minus", "m1", "m2", -1, attach=False)
    return Gate(g.check(), _dangling(n))


def check_balanced_cell_set(A, n: int) -> int:
    """The common column count T of A, or BalanceError."""
    counts = {sum(1 for (_, b) in A if b == v) for v in range(1, n + 1)}
    if len(counts) != 1:
        raise BalanceError(f"A is not vertically balanced: column counts {sorted(counts)}")
    for (u, v) in A:
        if not (1 <= u <= n and 1 <= v <= n):
            raise BalanceError(f"{(u, v)} outside [n]^2")
    return counts.pop()


@lru_cache(maxsize=None)
def build_phi_prime_abstract(A: frozenset, n: int, T: int | None = None) -> Gate:
    T0 = check_balanced_cell_set(A, n)
    if T is not None and T != T0:
        raise BalanceError(f"A has column count {T0}, expected {T}")
    g = _cell_skeleton(n, A)
    order = sorted(A)
    g.add_vertex("a1", HW1(len(order)), [("a1", u, v) for u, v in order])
    g.add_vertex("a2", HW1(len(order)), [("a2", u, v) for u, v in order])
    for (u, v) in order:
        g.add_edge(("a1", u, v), ("b", u, v), "a1", 1, attach=False)
        g.add_edge(("a2", u, v), ("b", u, v), "a2", 1, attach=False)
    return Gate(g.check(), _dangling(n))


@lru_cache(maxsize=None)
def build_phi(n: int) -> Gate:
    """Flat planar matchgate for f_kappa."""
    return flatten_gate(build_phi_abstract(n), matchgate_library())


@lru_cache(maxsize=None)
def build_phi_prime(A: frozenset, n: int, T: int | None = None) -> Gate:
    """Flat 2-apex matchgate Phi'(A); apices are the vertices 'a1' and 'a2'."""
    return flatten_gate(build_phi_prime_abstract(frozenset(A), n, T), matchgate_library())


PHI_PRIME_APICES = ("a1", "a2")


def phi_expected(x, n: int) -> int:
    return int(phi_prop(x, n))


def phi_prime_expected(x, n: int, A, T: int) -> int:
    if not phi_prop(x, n):
        return 0
    u = x[3 * n:].index(1) + 1
    v = x[:n].index(1) + 1
    return -T + 2 if (u, v) in A else -T


def g_combination(A, n: int, T: int | None = None, flat: bool = True) -> LinearCombination:
    """g_kappa = (T/2) Sig(Phi) + (1/2) Sig(Phi'(A)) on phi_one inputs."""
    A = frozenset(A)
    T0 = check_balanced_cell_set(A, n)
    T = T0 if T is None else T
    if flat:
        phi, phip = build_phi(n), build_phi_prime(A, n, T)
    else:
        phi, phip = build_phi_abstract(n), build_phi_prime_abstract(A, n, T)
    return LinearCombination([(Fraction(T, 2), phi), (Fraction(1, 2), phip)], 4 * n,
                             CellSignature(n, "PROPAGATE_CHECK", A))


def evaluate_combination(lc: LinearCombination, x) -> Scalar:
    """Pointwise value without building full 2^(4n) tables."""
    total = Scalar(0)
    for c, f in lc.terms:
        v = gate_value(f, x) if isinstance(f, Gate) else f(x)
        total = total + c * v
    return total


# ---------------------------------------------------------------------------
# branch graphs

@dataclass
class ApexBranch:
    omega: tuple
    coefficient: Scalar
    graph: SignatureGraph
    apices: list
    d: int


def instance_T(t: GridTilingInstance) -> int:
    if not t.C:
        return 0
    T = t.vertical_balance()
    if T is None:
        raise BalanceError("instance is not vertically balanced")
    return T


def apex_branch_graphs(t: GridTilingInstance, abstract: bool = False):
    """Yield one ApexBranch per omega : C -> {1, 2} (in lexicographic order)."""
    T = instance_T(t)
    cg = build_cell_graph(t)
    C = sorted(t.C)
    n = t.n
    phi = build_phi_abstract(n) if abstract else build_phi(n)
    denom = 2 ** len(C)
    for omega in itertools.product((1, 2), repeat=len(C)):
        choice = dict(zip(C, omega))
        g = cg.graph
        apices = []
        for (_, i, j) in cg.cells:
            c = ("c", i, j)
            if choice.get((i, j), 1) == 1:
                g = insert_gate(g, c, phi)
            else:
                A = frozenset(t.T[(i, j)])
                gate = build_phi_prime_abstract(A, n, T) if abstract else build_phi_prime(A, n, T)
                g = insert_gate(g, c, gate)
                apices += [(c, a) for a in PHI_PRIME_APICES]
        d = sum(1 for w in omega if w == 1)
        yield ApexBranch(omega, Scalar(Fraction(T ** d, denom)), g, apices, d)


def branch_embedded(branch: ApexBranch) -> EmbeddedGraph:
    return from_signature_graph(branch.graph)


def branch_weights(branch: ApexBranch) -> set:
    return {ed.weight for ed in branch.graph.edges.values()}


def apex_edges_unit(branch: ApexBranch) -> bool:
    aps = set(branch.apices)
    return all(ed.weight == 1 for ed in branch.graph.edges.values() if ed.u in aps or ed.v in aps)


def apices_independent(branch: ApexBranch) -> bool:
    aps = set(branch.apices)
    touched: dict = {}
    for ed in branch.graph.edges.values():
        if ed.u in aps and ed.v in aps:
            return False
        for a, x in ((ed.u, ed.v), (ed.v, ed.u)):
            if a in aps:
                touched.setdefault(x, set()).add(a)
    return all(len(s) <= 1 for s in touched.values())


def branch_is_planar_minus_apices(branch: ApexBranch) -> bool:
    g = branch.graph
    aps = set(branch.apices)
    rot, ends = {}, {}
    for v in g.sig:
        if v in aps:
            continue
        if v not in g.rotation:
            return False
        rot[v] = [e for e in g.rotation[v]
                  if not (g.edges[e].u in aps or g.edges[e].v in aps)]
    for e, ed in g.edges.items():
        if ed.u in aps or ed.v in aps:
            continue
        ends[e] = (ed.u, ed.v)
    return is_planar_rotation(rot, ends)


@dataclass
class CombinedReport:
    lhs: int
    rhs: Scalar
    T: int
    branches: list = field(default_factory=list)  # (omega, coefficient, perfmatch, fkt_calls)

    @property
    def ok(self) -> bool:
        return self.rhs == self.lhs

    def dump(self) -> str:
        lines = [f"lhs={self.lhs} rhs={self.rhs} T={self.T} ok={self.ok}"]
        for omega, coef, pm, calls in self.branches:
            lines.append(f"  omega={''.join(map(str, omega)) or '-'} coef={coef} perfmatch={pm} fkt_calls={calls}")
        return "\n".join(lines)


def _apex_branch_value(item):
    br, abstract = item
    stats: dict = {}
    if abstract:
        return holant(br.graph), 0
    pm = perfmatch_apex(branch_embedded(br), br.apices, stats)
    return pm, stats.get("fkt_calls", 0)


def verify_combined_gridtiling(t: GridTilingInstance, abstract: bool = False,
                               emit=None, jobs: int = 1) -> CombinedReport:
    """Tiling count against (1/2^|C|) sum_omega T^d(omega) PerfMatch(H_omega)."""
    lhs = count_tilings(t)
    T = instance_T(t)
    branches = list(apex_branch_graphs(t, abstract=abstract))
    if emit is not None:
        for br in branches:
            emit(br)
    values = pmap(_apex_branch_value, [(br, abstract) for br in branches], jobs)
    total = Scalar(0)
    rep = CombinedReport(lhs, total, T)
    for br, (pm, calls) in zip(branches, values):
        total = total + br.coefficient * pm
        rep.branches.append((br.omega, br.coefficient, pm, calls))
    rep.rhs = total
    return rep
