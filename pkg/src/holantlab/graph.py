"""Signature graphs and exact Holant evaluation.

Two evaluators are provided.  ``holant_enumerate`` is the literal sum over
all 2^|E| assignments and refuses graphs above an edge budget.  ``contract``
eliminates vertices one at a time while keeping a sparse table indexed by
the bits of the edges that cross the processed/unprocessed cut; it is exact
and is what the pipelines use on gadget-sized graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .scalar import Scalar, as_scalar
from .signatures import HW1, ArityError, Signature

DEFAULT_EDGE_BUDGET = 28


class BudgetExceeded(RuntimeError):
    pass


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    u: Hashable
    v: Hashable | None  # None marks a dangling edge
    weight: Scalar

    @property
    def dangling(self) -> bool:
        return self.v is None

    def other(self, x):
        if self.u == x:
            return self.v
        if self.v == x:
            return self.u
        raise GraphError(f"{x!r} is not an endpoint")


class SignatureGraph:
    """Edge-weighted multigraph with a signature and ordered edge list per vertex.

    ``rotation`` optionally stores a clockwise cyclic order of incident edges
    for some vertices; it witnesses planarity and is never inferred.
    """

    def __init__(self):
        self.sig: dict = {}
        self.inc: dict = {}
        self.edges: dict = {}
        self.rotation: dict = {}

    # construction -----------------------------------------------------
    def add_vertex(self, v, sig: Signature, incidence: Sequence | None = None):
        if v in self.sig:
            raise GraphError(f"duplicate vertex {v!r}")
        self.sig[v] = sig
        self.inc[v] = list(incidence) if incidence is not None else []
        return v

    def add_edge(self, e, u, v=None, weight=1, *, attach: bool = True):
        if e in self.edges:
            raise GraphError(f"duplicate edge {e!r}")
        if u not in self.sig or (v is not None and v not in self.sig):
            raise GraphError(f"edge {e!r} has an unknown endpoint")
        self.edges[e] = Edge(u, v, as_scalar(weight))
        if attach:
            self.inc[u].append(e)
            if v is not None:
                self.inc[v].append(e)
        return e

    def set_incidence(self, v, edges: Sequence):
        self.inc[v] = list(edges)

    def copy(self) -> "SignatureGraph":
        g = SignatureGraph()
        g.sig = dict(self.sig)
        g.inc = {v: list(l) for v, l in self.inc.items()}
        g.edges = dict(self.edges)
        g.rotation = {v: list(l) for v, l in self.rotation.items()}
        return g

    # queries ------------------------------------------------------------
    @property
    def vertices(self) -> list:
        return list(self.sig)

    def dangling_edges(self) -> list:
        return [e for e, ed in self.edges.items() if ed.v is None]

    def is_closed(self) -> bool:
        return not any(ed.v is None for ed in self.edges.values())

    def degree(self, v) -> int:
        return len(self.inc[v])

    def check(self):
        count: dict = {e: 0 for e in self.edges}
        for v, lst in self.inc.items():
            if self.sig[v].arity != len(lst):
                raise ArityError(f"vertex {v!r}: arity {self.sig[v].arity} but degree {len(lst)}")
            for e in lst:
                if e not in self.edges:
                    raise GraphError(f"vertex {v!r} lists unknown edge {e!r}")
                ed = self.edges[e]
                if v not in (ed.u, ed.v):
                    raise GraphError(f"edge {e!r} listed at non-endpoint {v!r}")
                count[e] += 1
        for e, ed in self.edges.items():
            want = 1 if ed.v is None else 2
            if count[e] != want:
                raise GraphError(f"edge {e!r} appears {count[e]} times in incidence lists")
        for v, rot in self.rotation.items():
            # a rotation may omit edges that are not embedded (apex edges)
            if len(set(rot)) != len(rot) or not set(rot) <= set(self.inc[v]):
                raise GraphError(f"rotation at {v!r} is not a sub-permutation of its edges")
        return self


def disjoint_union(g1: SignatureGraph, g2: SignatureGraph, tags=("a", "b")) -> SignatureGraph:
    g = SignatureGraph()
    for tag, h in zip(tags, (g1, g2)):
        for v, s in h.sig.items():
            g.add_vertex((tag, v), s, [(tag, e) for e in h.inc[v]])
        for e, ed in h.edges.items():
            g.edges[(tag, e)] = Edge((tag, ed.u), None if ed.v is None else (tag, ed.v), ed.weight)
        for v, rot in h.rotation.items():
            g.rotation[(tag, v)] = [(tag, e) for e in rot]
    return g


def weighted_graph_to_signature_graph(vertices: Iterable, edges: Iterable[tuple]) -> SignatureGraph:
    """Attach HW=1 to every vertex of a weighted graph given as (u, v, w) triples."""
    g = SignatureGraph()
    vertices = list(vertices)
    adj = {v: [] for v in vertices}
    elist = []
    for idx, (u, v, w) in enumerate(edges):
        elist.append((idx, u, v, w))
        adj[u].append(idx)
        adj[v].append(idx)
    for v in vertices:
        g.add_vertex(v, HW1(len(adj[v])), adj[v])
    for idx, u, v, w in elist:
        g.add_edge(idx, u, v, w, attach=False)
    return g


# ---------------------------------------------------------------------------
# Evaluation

def _num(x: Scalar):
    """Cheapest exact representation: int, Fraction, or Scalar if complex."""
    if x.im != 0:
        return x
    r = x.re
    return r.numerator if r.denominator == 1 else r


def val(g: SignatureGraph, x: dict) -> Scalar:
    total = Scalar(1)
    for v, lst in g.inc.items():
        total = total * g.sig[v](tuple(x[e] for e in lst))
        if total.is_zero():
            return total
    return total


def assignment_weight(g: SignatureGraph, x: dict) -> Scalar:
    w = Scalar(1)
    for e, bit in x.items():
        if bit:
            w = w * g.edges[e].weight
    return w


def holant_enumerate(g: SignatureGraph, budget: int = DEFAULT_EDGE_BUDGET) -> Scalar:
    if not g.is_closed():
        raise GraphError("holant needs a closed signature graph")
    edges = list(g.edges)
    if len(edges) > budget:
        raise BudgetExceeded(f"{len(edges)} edges exceed the enumeration budget of {budget}")
    total = Scalar(0)
    for bits in itertools.product((0, 1), repeat=len(edges)):
        x = dict(zip(edges, bits))
        v = val(g, x)
        if not v.is_zero():
            total = total + assignment_weight(g, x) * v
    return total


def _choose_order(g: SignatureGraph, open_edges: set) -> list:
    """Greedy elimination order keeping the cut small."""
    remaining = set(g.sig)
    done: set = set()
    frontier: set = set()
    order = []
    index = {v: i for i, v in enumerate(g.sig)}
    while remaining:
        best, best_key = None, None
        for v in remaining:
            old = new = 0
            for e in set(g.inc[v]):
                ed = g.edges[e]
                if e in frontier:
                    old += 1
                elif ed.v is None or ed.u == ed.v:
                    new += e in open_edges
                else:
                    new += 1
            key = (new - old, -old, index[v])
            if best_key is None or key < best_key:
                best, best_key = v, key
        order.append(best)
        remaining.discard(best)
        done.add(best)
        for e in set(g.inc[best]):
            ed = g.edges[e]
            if e in frontier:
                frontier.discard(e)
            elif ed.v is None:
                if e in open_edges:
                    frontier.add(e)
            elif ed.u != ed.v:
                frontier.add(e)
    return order


def contract(g: SignatureGraph, open_edges: Sequence = (), order: Sequence | None = None) -> dict:
    """Sum out every non-open edge.

    Returns a dict mapping bit tuples over ``open_edges`` (in the given order)
    to nonzero values.  Dangling edges must all be open.
    """
    open_edges = list(open_edges)
    open_set = set(open_edges)
    for e in g.dangling_edges():
        if e not in open_set:
            raise GraphError(f"dangling edge {e!r} is not open")
    if order is None:
        order = _choose_order(g, open_set)
    weight = {e: _num(ed.weight) for e, ed in g.edges.items()}
    frontier: list = []
    states: dict = {(): 1}
    for v in order:
        lst = g.inc[v]
        sig = g.sig[v]
        pos = {}
        for i, e in enumerate(lst):
            pos.setdefault(e, []).append(i)
        fpos = {e: i for i, e in enumerate(frontier)}
        old = [e for e in pos if e in fpos]
        new = [e for e in pos if e not in fpos and (g.edges[e].v is not None and g.edges[e].u != g.edges[e].v or e in open_set)]
        loops = [e for e in pos if e not in fpos and e not in new]
        groups: dict = {}
        for bits, value in sig.support():
            ok = True
            for e, ps in pos.items():
                if len(ps) == 2 and bits[ps[0]] != bits[ps[1]]:
                    ok = False
                    break
            if not ok:
                continue
            coef = _num(value)
            for e in new:
                if bits[pos[e][0]]:
                    coef = coef * weight[e]
            for e in loops:
                if bits[pos[e][0]]:
                    coef = coef * weight[e]
            if coef == 0:
                continue
            key = tuple(bits[pos[e][0]] for e in old)
            nb = tuple(bits[pos[e][0]] for e in new)
            groups.setdefault(key, []).append((nb, coef))
        old_idx = [fpos[e] for e in old]
        old_set = set(old)
        keep_idx = [i for i, e in enumerate(frontier) if e not in old_set]
        new_states: dict = {}
        for st, value in states.items():
            key = tuple(st[i] for i in old_idx)
            entries = groups.get(key)
            if not entries:
                continue
            rest = tuple(st[i] for i in keep_idx)
            for nb, coef in entries:
                ns = rest + nb
                new_states[ns] = new_states.get(ns, 0) + value * coef
        frontier = [frontier[i] for i in keep_idx] + new
        states = {k: x for k, x in new_states.items() if x != 0}
        if not states:
            break
    perm = [frontier.index(e) for e in open_edges] if states else []
    out = {}
    for st, value in states.items():
        out[tuple(st[i] for i in perm)] = as_scalar(value)
    return out


def holant(g: SignatureGraph, method: str = "contract", budget: int = DEFAULT_EDGE_BUDGET) -> Scalar:
    if not g.is_closed():
        raise GraphError("holant needs a closed signature graph")
    if method == "enumerate":
        return holant_enumerate(g, budget)
    if method != "contract":
        raise ValueError(f"unknown holant method {method!r}")
    return contract(g).get((), Scalar(0))


def perfmatch_via_holant(vertices, edges, method: str = "contract", budget: int = DEFAULT_EDGE_BUDGET) -> Scalar:
    return holant(weighted_graph_to_signature_graph(vertices, edges), method, budget)


# ---------------------------------------------------------------------------
# Rotation systems

def trace_faces(rotation: dict, endpoints: dict) -> list[list[tuple]]:
    """Faces of a rotation system as lists of darts ``(edge, tail)``.

    ``rotation[v]`` is the clockwise list of edge ids at v and
    ``endpoints[e] = (u, v)``.  Self-loops are not supported.
    """
    pos = {}
    for v, rot in rotation.items():
        for i, e in enumerate(rot):
            if (e, v) in pos:
                raise GraphError(f"edge {e!r} appears twice at {v!r}")
            pos[(e, v)] = i
    seen = set()
    faces = []
    for v, rot in rotation.items():
        for e in rot:
            start = (e, v)
            if start in seen:
                continue
            face = []
            d = start
            while d not in seen:
                seen.add(d)
                face.append(d)
                e0, tail = d
                a, b = endpoints[e0]
                if a == b:
                    raise GraphError("self-loops are not supported in rotation systems")
                head = b if tail == a else a
                rot_h = rotation[head]
                e1 = rot_h[(pos[(e0, head)] + 1) % len(rot_h)]
                d = (e1, head)
            if d != start:
                raise GraphError("rotation system is inconsistent")
            faces.append(face)
    return faces


def components(vertices: Iterable, endpoints: dict) -> list[set]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in endpoints.values():
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict = {}
    for v in parent:
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def euler_genus(rotation: dict, endpoints: dict) -> int:
    """Orientable genus of the rotation system, summed over components."""
    verts = set(rotation)
    for a, b in endpoints.values():
        verts.add(a)
        verts.add(b)
    full_rot = {v: rotation.get(v, []) for v in verts}
    faces = trace_faces(full_rot, endpoints)
    comps = components(verts, endpoints)
    isolated = sum(1 for v in verts if not full_rot[v])
    f = len(faces) + isolated
    chi = len(verts) - len(endpoints) + f
    twice_g = 2 * len(comps) - chi
    if twice_g % 2:
        raise GraphError("rotation system has odd Euler defect")
    return twice_g // 2


def is_planar_rotation(rotation: dict, endpoints: dict) -> bool:
    try:
        return euler_genus(rotation, endpoints) == 0
    except GraphError:
        return False
