"""Perfect-matching sums: brute force, FKT on embedded planar graphs, apex.

``perfmatch_fkt`` first applies matching-preserving reductions that keep a
rotation system valid (forced edges at degree-1 vertices, contraction of
degree-2 vertices, merging of parallel edges).  Each remaining component
gets a Pfaffian orientation from a spanning tree and its dual tree.  The
global sign is fixed from one reference perfect matching.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable, Sequence

from .graph import GraphError, SignatureGraph, euler_genus, trace_faces
from .linalg import _pfaffian_inplace, pfaffian_integer
from .scalar import Scalar, as_scalar
from .signatures import Builtin

# below this many vertices exact rational elimination is cheaper than CRT
_MODULAR_THRESHOLD = 24


class EmbeddingError(GraphError):
    pass


@dataclass
class EmbeddedGraph:
    """Weighted multigraph; ``edges[i] = (u, v, w)``; rotation lists edge indices clockwise."""

    vertices: list
    edges: list
    rotation: dict | None = None

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex")
        clean = []
        for u, v, w in self.edges:
            if u not in vs or v not in vs:
                raise GraphError(f"edge ({u!r}, {v!r}) has an unknown endpoint")
            clean.append((u, v, as_scalar(w)))
        self.edges = clean

    def incident(self) -> dict:
        inc = {v: [] for v in self.vertices}
        for i, (u, v, _) in enumerate(self.edges):
            inc[u].append(i)
            if v != u:
                inc[v].append(i)
        return inc

    def endpoints(self) -> dict:
        return {i: (u, v) for i, (u, v, _) in enumerate(self.edges)}

    def check_embedding(self) -> None:
        if self.rotation is None:
            raise EmbeddingError("graph carries no rotation system")
        inc = self.incident()
        for v in self.vertices:
            rot = self.rotation.get(v, [])
            if sorted(rot) != sorted(i for i in inc[v] if self.edges[i][0] != self.edges[i][1]):
                raise EmbeddingError(f"rotation at {v!r} does not list its edges")
        ends = {i: (u, v) for i, (u, v, _) in enumerate(self.edges) if u != v}
        try:
            g = euler_genus({v: list(self.rotation.get(v, [])) for v in self.vertices}, ends)
        except GraphError as exc:
            raise EmbeddingError(str(exc)) from exc
        if g != 0:
            raise EmbeddingError(f"rotation system has genus {g}, not planar")

    def subgraph(self, keep: Iterable) -> "EmbeddedGraph":
        keep = set(keep)
        verts = [v for v in self.vertices if v in keep]
        new_index = {}
        edges = []
        for i, (u, v, w) in enumerate(self.edges):
            if u in keep and v in keep:
                new_index[i] = len(edges)
                edges.append((u, v, w))
        rot = None
        if self.rotation is not None:
            rot = {v: [new_index[i] for i in self.rotation.get(v, []) if i in new_index] for v in verts}
        return EmbeddedGraph(verts, edges, rot)


def from_signature_graph(sg: SignatureGraph, require_embedding: bool = False) -> EmbeddedGraph:
    """Matchgate-style signature graph (all HW=1, closed) to EmbeddedGraph.

    Vertices without a rotation entry (apices) keep no rotation; callers
    remove them before running FKT.
    """
    for v, s in sg.sig.items():
        if not (isinstance(s, Builtin) and s.name == "HW=1"):
            raise GraphError(f"vertex {v!r} does not carry HW=1")
    if not sg.is_closed():
        raise GraphError("graph has dangling edges")
    eids = list(sg.edges)
    index = {e: i for i, e in enumerate(eids)}
    edges = [(sg.edges[e].u, sg.edges[e].v, sg.edges[e].weight) for e in eids]
    rot = {v: [index[e] for e in r] for v, r in sg.rotation.items()}
    if require_embedding and set(rot) != set(sg.sig):
        raise EmbeddingError("some vertices carry no rotation")
    return EmbeddedGraph(list(sg.sig), edges, rot)


# ---------------------------------------------------------------------------
# brute force

def perfmatch_bruteforce(g: EmbeddedGraph) -> Scalar:
    if len(g.vertices) % 2:
        return Scalar(0)
    adj = {v: [] for v in g.vertices}
    for u, v, w in g.edges:
        if u != v:
            adj[u].append((v, w))
            adj[v].append((u, w))

    def rec(free: frozenset):
        if not free:
            return Scalar(1)
        # branch on the free vertex with the fewest free neighbours
        best, best_deg = None, None
        for x in free:
            d = sum(1 for y, _ in adj[x] if y in free)
            if best_deg is None or d < best_deg:
                best, best_deg = x, d
                if d == 0:
                    return Scalar(0)
        total = Scalar(0)
        rest = free - {best}
        for y, w in adj[best]:
            if y in rest:
                sub = rec(rest - {y})
                if not sub.is_zero():
                    total = total + w * sub
        return total

    return rec(frozenset(g.vertices))


# ---------------------------------------------------------------------------
# Pfaffian orientation

def pfaffian_orientation(g: EmbeddedGraph) -> dict:
    """Edge index -> tail vertex, for a connected embedded planar graph.

    Every face except the root face (the first traced one) has an odd
    number of edges agreeing with the face traversal direction.
    """
    g.check_embedding()
    return _orientation(g)


def _orientation(g: EmbeddedGraph) -> dict:
    ends = g.endpoints()
    loops = {i for i, (u, v) in ends.items() if u == v}
    ends = {i: e for i, e in ends.items() if i not in loops}
    if len(g.vertices) <= 1:
        return {}
    rot = {v: list(g.rotation.get(v, [])) for v in g.vertices}
    faces = trace_faces(rot, ends)
    # spanning tree by BFS
    inc = {v: [] for v in g.vertices}
    for i, (u, v) in ends.items():
        inc[u].append(i)
        inc[v].append(i)
    root = g.vertices[0]
    seen = {root}
    tree = set()
    queue = [root]
    for x in queue:
        for i in inc[x]:
            u, v = ends[i]
            y = v if u == x else u
            if y not in seen:
                seen.add(y)
                tree.add(i)
                queue.append(y)
    if len(seen) != len(g.vertices):
        raise EmbeddingError("pfaffian_orientation needs a connected graph")
    tail = {i: ends[i][0] for i in tree}
    face_of = {}
    for fi, face in enumerate(faces):
        for d in face:
            face_of[d] = fi
    # dual tree on the non-tree edges
    dual = {fi: [] for fi in range(len(faces))}
    for i, (u, v) in ends.items():
        if i in tree:
            continue
        f1, f2 = face_of[(i, u)], face_of[(i, v)]
        dual[f1].append((i, f2))
        dual[f2].append((i, f1))
    parent_edge = {0: None}
    order = [0]
    for f in order:
        for i, h in dual[f]:
            if h not in parent_edge:
                parent_edge[h] = i
                order.append(h)
    if len(order) != len(faces):
        raise EmbeddingError("dual of the non-tree edges is not connected")
    for f in reversed(order[1:]):
        pe = parent_edge[f]
        agree = 0
        pe_dart = None
        for (i, t) in faces[f]:
            if i == pe:
                pe_dart = t
                continue
            agree += tail[i] == t
        # orient the parent edge so the count becomes odd
        tail[pe] = pe_dart if agree % 2 == 0 else (ends[pe][0] if ends[pe][1] == pe_dart else ends[pe][1])
    return tail


def face_parities(g: EmbeddedGraph, tail: dict) -> list[int]:
    ends = {i: e for i, e in g.endpoints().items() if e[0] != e[1]}
    rot = {v: list(g.rotation.get(v, [])) for v in g.vertices}
    return [sum(tail[i] == t for i, t in face) % 2 for face in trace_faces(rot, ends)]


def skew_matrix(g: EmbeddedGraph, tail: dict) -> tuple[list, dict]:
    idx = {v: k for k, v in enumerate(g.vertices)}
    n = len(g.vertices)
    a = [[0] * n for _ in range(n)]
    for i, (u, v, w) in enumerate(g.edges):
        if u == v:
            continue
        x, y = (u, v) if tail[i] == u else (v, u)
        wx = _plain(w)
        a[idx[x]][idx[y]] = a[idx[x]][idx[y]] + wx
        a[idx[y]][idx[x]] = a[idx[y]][idx[x]] - wx
    return a, idx


def _plain(w: Scalar):
    if w.im != 0:
        return w
    return w.re.numerator if w.re.denominator == 1 else w.re


def pairing_sign(pairs: Sequence[tuple[int, int]]) -> int:
    """Sign of the permutation (i1 j1 i2 j2 ...) for a perfect pairing."""
    ps = sorted((min(p), max(p)) for p in pairs)
    crossings = 0
    for a in range(len(ps)):
        i1, j1 = ps[a]
        for b in range(a + 1, len(ps)):
            i2, j2 = ps[b]
            if i2 < j1 < j2:
                crossings += 1
    return -1 if crossings % 2 else 1


def find_perfect_matching(vertices: Sequence, edges: Sequence[tuple]) -> list[int] | None:
    """Edge indices of some perfect matching, or None.

    Bipartite graphs use augmenting paths; otherwise depth-first search
    with degree-1 propagation.
    """
    if len(vertices) % 2:
        return None
    adj = {v: [] for v in vertices}
    for i, (u, v, _) in enumerate(edges):
        if u != v:
            adj[u].append((v, i))
            adj[v].append((u, i))
    colour = _bipartition(vertices, adj)
    if colour is not None:
        return _kuhn(vertices, adj, colour)
    return _dfs_matching(vertices, adj)


def _bipartition(vertices, adj):
    colour = {}
    for s in vertices:
        if s in colour:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
                elif colour[y] == colour[x]:
                    return None
    return colour


def _kuhn(vertices, adj, colour):
    left = [v for v in vertices if colour[v] == 0]
    if 2 * len(left) != len(vertices):
        return None
    match_r: dict = {}
    match_l: dict = {}
    for s in left:
        # iterative augmenting path search
        prev = {s: None}
        stack = [s]
        found = None
        while stack and found is None:
            x = stack.pop()
            for y, i in adj[x]:
                if y in prev:
                    continue
                prev[y] = (x, i)
                if y not in match_r:
                    found = y
                    break
                z, _ = match_r[y]
                if z not in prev:
                    prev[z] = (y, match_r[y][1])
                    stack.append(z)
        if found is None:
            return None
        y = found
        while True:
            x, i = prev[y]
            match_r[y] = (x, i)
            old = match_l.get(x)
            match_l[x] = (y, i)
            if old is None:
                break
            y = old[0]
    return [i for _, i in match_l.values()]


def _dfs_matching(vertices, adj):
    import sys

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * len(vertices) + 100))
    try:
        def rec(free: frozenset, chosen: list):
            if not free:
                return chosen
            best, best_opts = None, None
            for x in free:
                opts = [(y, i) for y, i in adj[x] if y in free]
                if best_opts is None or len(opts) < len(best_opts):
                    best, best_opts = x, opts
                    if len(opts) <= 1:
                        break
            for y, i in best_opts:
                r = rec(free - {best, y}, chosen + [i])
                if r is not None:
                    return r
            return None

        return rec(frozenset(vertices), [])
    finally:
        sys.setrecursionlimit(limit)


# ---------------------------------------------------------------------------
# reductions that preserve both PerfMatch and planarity of the rotation

class _Work:
    """Mutable multigraph with rotation, used during reduction."""

    def __init__(self, g: EmbeddedGraph):
        self.ends = {}
        self.w = {}
        self.rot = {v: [] for v in g.vertices}
        for i, (u, v, w) in enumerate(g.edges):
            if u == v:
                continue
            self.ends[i] = (u, v)
            self.w[i] = _plain(w)
        for v in g.vertices:
            self.rot[v] = [i for i in g.rotation.get(v, []) if i in self.ends]
        self.next_id = len(g.edges)
        self.factor = 1

    def other(self, i, x):
        u, v = self.ends[i]
        return v if u == x else u

    def remove_edge(self, i):
        u, v = self.ends.pop(i)
        del self.w[i]
        self.rot[u].remove(i)
        self.rot[v].remove(i)

    def remove_vertex(self, x):
        for i in list(self.rot[x]):
            self.remove_edge(i)
        del self.rot[x]

    def reduce(self) -> bool:
        """Return False when PerfMatch is certainly zero."""
        stack = list(self.rot)
        while stack:
            x = stack.pop()
            if x not in self.rot:
                continue
            # merge parallel edges at x
            seen = {}
            for i in list(self.rot[x]):
                y = self.other(i, x)
                if y in seen:
                    j = seen[y]
                    self.w[j] = self.w[j] + self.w[i]
                    self.remove_edge(i)
                    if self.w[j] == 0:
                        self.remove_edge(j)
                        del seen[y]
                    stack.append(y)
                else:
                    seen[y] = i
            deg = len(self.rot[x])
            if deg == 0:
                return False
            if deg == 1:
                i = self.rot[x][0]
                y = self.other(i, x)
                self.factor = self.factor * self.w[i]
                nbrs = [self.other(j, y) for j in self.rot[y] if j != i]
                self.remove_vertex(x)
                self.remove_vertex(y)
                stack.extend(n for n in nbrs if n in self.rot)
                continue
            if deg == 2:
                e1, e2 = self.rot[x]
                a, b = self.other(e1, x), self.other(e2, x)
                w1, w2 = self.w[e1], self.w[e2]
                # contract a - x - b into a single vertex kept under the name a
                ra, rb = self.rot[a], self.rot[b]
                pa, pb = ra.index(e1), rb.index(e2)
                b_seq = rb[pb + 1:] + rb[:pb]
                for j in ra:
                    if j != e1:
                        self.w[j] = self.w[j] * w2
                for j in b_seq:
                    self.w[j] = self.w[j] * w1
                new_rot = ra[:pa] + b_seq + ra[pa + 1:]
                for j in b_seq:
                    u, v = self.ends[j]
                    self.ends[j] = (a if u == b else u, a if v == b else v)
                del self.ends[e1], self.ends[e2], self.w[e1], self.w[e2]
                del self.rot[x], self.rot[b]
                self.rot[a] = new_rot
                # former a-b edges are now loops; they never occur in a matching
                for j in {j for j in new_rot if self.ends[j][0] == self.ends[j][1]}:
                    pos = [k for k, t in enumerate(self.rot[a]) if t == j]
                    for k in reversed(pos):
                        del self.rot[a][k]
                    del self.ends[j], self.w[j]
                stack.append(a)
                stack.extend(self.other(j, a) for j in self.rot[a])
        return True


def _component_lists(rot: dict, ends: dict) -> list[list]:
    seen = set()
    comps = []
    for s in rot:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        for x in comp:
            for i in rot[x]:
                u, v = ends[i]
                y = v if u == x else u
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
        comps.append(comp)
    return comps


@dataclass
class FKTStats:
    calls: int = 0
    pfaffians: int = 0
    vertices_in: int = 0
    vertices_reduced: int = 0


STATS = FKTStats()

# callables f(matrix, pfaffian) run on every skew matrix FKT evaluates
MATRIX_OBSERVERS: list = []


def perfmatch_fkt(g: EmbeddedGraph, check: bool = True, reduce: bool = True) -> Scalar:
    """PerfMatch of an embedded planar graph via Pfaffian orientations."""
    STATS.calls += 1
    STATS.vertices_in += len(g.vertices)
    if check:
        g.check_embedding()
    if len(g.vertices) % 2:
        return Scalar(0)
    work = _Work(g)
    if reduce:
        if not work.reduce():
            return Scalar(0)
    total = work.factor
    if not work.rot:
        return as_scalar(total)
    for comp in _component_lists(work.rot, work.ends):
        if len(comp) % 2:
            return Scalar(0)
        STATS.vertices_reduced += len(comp)
        val = _component_pm(comp, work)
        if val == 0:
            return Scalar(0)
        total = total * val
    return as_scalar(total)


def _component_pm(comp: list, work: _Work):
    cset = set(comp)
    eids = sorted({i for v in comp for i in work.rot[v]})
    local = {i: k for k, i in enumerate(eids)}
    edges = [(work.ends[i][0], work.ends[i][1], work.w[i]) for i in eids]
    rot = {v: [local[i] for i in work.rot[v]] for v in comp}
    sub = EmbeddedGraph(comp, edges, rot)
    tail = _orientation(sub)
    a, idx = skew_matrix(sub, tail)
    STATS.pfaffians += 1
    pf = _pfaffian_any(a)
    for obs in MATRIX_OBSERVERS:
        obs(a, pf)
    if pf == 0:
        return 0
    m = find_perfect_matching(comp, [(u, v, None) for u, v, _ in edges])
    if m is None:
        raise ArithmeticError("nonzero Pfaffian but no perfect matching found")
    pairs = []
    sign = 1
    for i in m:
        u, v, _ = edges[i]
        x, y = idx[u], idx[v]
        pairs.append((x, y))
        # entry a[min][max] carries +w when the edge runs min -> max
        lo = u if x < y else v
        if tail[i] != lo:
            sign = -sign
    sign *= pairing_sign(pairs)
    return pf if sign == 1 else -pf


def _pfaffian_any(a: list):
    n = len(a)
    entries = [x for r in a for x in r]
    if any(isinstance(x, Scalar) for x in entries):
        return _pfaffian_inplace([[as_scalar(x) for x in r] for r in a])
    den = 1
    for x in entries:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = lcm(den, x.denominator)
    if n < _MODULAR_THRESHOLD:
        return _pfaffian_inplace([[Fraction(x) for x in r] for r in a])
    ints = [[int(x * den) for x in r] for r in a]
    pf = pfaffian_integer(ints)
    if den == 1:
        return pf
    return Fraction(pf, den ** (n // 2))


# ---------------------------------------------------------------------------
# apex evaluation

def perfmatch_apex(g: EmbeddedGraph, apices: Iterable, stats: dict | None = None) -> Scalar:
    """PerfMatch when g minus ``apices`` carries a planar rotation system.

    Sums over every way of matching the apices (to each other or into the
    planar part), times the FKT value of the residual planar graph.
    """
    S = [a for a in g.vertices if a in set(apices)]
    sset = set(S)
    planar = g.subgraph(v for v in g.vertices if v not in sset)
    planar.check_embedding()
    if not S:
        if stats is not None:
            stats["fkt_calls"] = stats.get("fkt_calls", 0) + 1
        return perfmatch_fkt(planar, check=False)
    # apex adjacency (parallel apex edges kept distinct)
    nbrs = {a: [] for a in S}
    for u, v, w in g.edges:
        if u == v:
            continue
        if u in sset:
            nbrs[u].append((v, w))
        if v in sset and u != v:
            nbrs[v].append((u, w))
    base_vertices = planar.vertices
    total = Scalar(0)
    count = 0

    def rec(k: int, used: frozenset, weight):
        nonlocal total, count
        while k < len(S) and S[k] in used:
            k += 1
        if k == len(S):
            keep = [v for v in base_vertices if v not in used]
            res = planar.subgraph(keep)
            count += 1
            pm = perfmatch_fkt(res, check=False)
            if not pm.is_zero():
                total = total + weight * pm
            return
        a = S[k]
        for x, w in nbrs[a]:
            if x in used or x == a:
                continue
            rec(k + 1, used | {a, x}, weight * w)

    rec(0, frozenset(), Scalar(1))
    if stats is not None:
        stats["fkt_calls"] = stats.get("fkt_calls", 0) + count
    return total
