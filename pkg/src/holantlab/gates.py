"""Gates: signature graphs with labelled dangling edges.

A gate behaves like a single vertex whose signature is the sum over all
internal assignments.  Inserting it for a vertex of matching degree keeps
the Holant unchanged; this module also expands vertices carrying linear
combinations of signatures into weighted branch graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Edge, GraphError, SignatureGraph, contract, is_planar_rotation
from .scalar import Scalar, as_scalar
from .signatures import ArityError, Builtin, DenseTable, Signature, bits_to_index


@dataclass
class Gate:
    graph: SignatureGraph
    dangling: tuple

    def __post_init__(self):
        self.dangling = tuple(self.dangling)
        dang = set(self.graph.dangling_edges())
        if set(self.dangling) != dang or len(dang) != len(self.dangling):
            raise GraphError("gate dangling list must enumerate exactly the dangling edges")
        for e in self.dangling:
            if self.graph.edges[e].weight != 1:
                raise GraphError(f"dangling edge {e!r} must have weight 1")

    @property
    def arity(self) -> int:
        return len(self.dangling)

    @staticmethod
    def single_vertex(sig: Signature, name="v") -> "Gate":
        g = SignatureGraph()
        g.add_vertex(name, sig)
        dang = []
        for i in range(sig.arity):
            dang.append(g.add_edge(("d", i), name))
        g.rotation[name] = list(dang)
        return Gate(g, tuple(dang))

    def is_planar(self, skip_labels: Sequence[int] = (), skip_vertices: Sequence = (),
                  order: Sequence[int] | None = None) -> bool:
        """Check the rotation witness with dangling edges on the outer face.

        Dangling labels in ``skip_labels`` (1-based) and the vertices in
        ``skip_vertices`` are removed first.  The remaining dangling edges
        must appear clockwise in label order around the outer face (or in
        the clockwise label sequence ``order``); this is tested by joining
        them to an extra vertex whose rotation lists them in reverse.
        """
        g = self.graph
        skip_v = set(skip_vertices)
        skip_e = {self.dangling[i - 1] for i in skip_labels}
        for v in skip_v:
            skip_e.update(g.inc[v])
        rot, ends = {}, {}
        for v in g.sig:
            if v in skip_v:
                continue
            if v not in g.rotation:
                return False
            rot[v] = [e for e in g.rotation[v] if e not in skip_e]
        outer = ("__outer__",)
        labels = range(1, self.arity + 1) if order is None else order
        kept = [self.dangling[i - 1] for i in labels if self.dangling[i - 1] not in skip_e]
        embedded = {e for r in rot.values() for e in r}
        for e, ed in g.edges.items():
            if e in skip_e:
                continue
            if e not in embedded:
                return False
            ends[e] = (ed.u, outer) if ed.v is None else (ed.u, ed.v)
        rot[outer] = list(reversed(kept))
        return is_planar_rotation(rot, ends)


def gate_signature(gate: Gate) -> DenseTable:
    d = gate.arity
    vals = [Scalar(0)] * (1 << d)
    for bits, value in contract(gate.graph, gate.dangling).items():
        vals[bits_to_index(bits)] = value
    return DenseTable(tuple(vals))


def gate_value(gate: Gate, bits) -> Scalar:
    """Sig(gate, bits) by pinning every dangling edge with a unary vertex."""
    if len(bits) != gate.arity:
        raise ArityError(f"expected {gate.arity} bits, got {len(bits)}")
    g = gate.graph.copy()
    for i, (e, b) in enumerate(zip(gate.dangling, bits)):
        pin = ("__pin__", i)
        g.sig[pin] = DenseTable((Scalar(1 - b), Scalar(b)))
        g.inc[pin] = [e]
        ed = g.edges[e]
        g.edges[e] = Edge(ed.u, pin, ed.weight)
    return contract(g, ()).get((), Scalar(0))


def insert_gate(omega: SignatureGraph, v, gate: Gate, tag=None) -> SignatureGraph:
    """Replace vertex ``v`` by a copy of ``gate``.

    The i-th incident edge of v is identified with the i-th dangling edge of
    the gate and keeps its weight.  New ids are ``(tag, old_id)`` with tag
    defaulting to v.
    """
    host_inc = omega.inc[v]
    if len(host_inc) != gate.arity:
        raise ArityError(f"vertex {v!r} has degree {len(host_inc)} but gate arity is {gate.arity}")
    tag = v if tag is None else tag
    gg = gate.graph
    holder = {}
    for i, d in enumerate(gate.dangling):
        holder[d] = (i, gg.edges[d].u)

    def new_edge(ge, i_hint=None):
        if ge in holder:
            return host_inc[holder[ge][0]]
        return (tag, ge)

    out = SignatureGraph()
    for u, s in omega.sig.items():
        if u != v:
            out.sig[u] = s
            out.inc[u] = list(omega.inc[u])
    for u, rot in omega.rotation.items():
        if u != v:
            out.rotation[u] = list(rot)
    for gv, s in gg.sig.items():
        nv = (tag, gv)
        if nv in out.sig:
            raise GraphError(f"vertex id collision at {nv!r}")
        out.sig[nv] = s
        out.inc[nv] = [new_edge(ge) for ge in gg.inc[gv]]
    for gv, rot in gg.rotation.items():
        out.rotation[(tag, gv)] = [new_edge(ge) for ge in rot]
    for e, ed in omega.edges.items():
        out.edges[e] = ed
    for ge, ed in gg.edges.items():
        if ge not in holder:
            out.edges[(tag, ge)] = Edge((tag, ed.u), (tag, ed.v), ed.weight)
    # re-point host edges that ended at v
    ends: dict = {}
    for i, e in enumerate(host_inc):
        ends.setdefault(e, []).append((tag, gg.edges[gate.dangling[i]].u))
    for e, new_ends in ends.items():
        ed = omega.edges[e]
        if ed.v is None:
            out.edges[e] = Edge(new_ends[0], None, ed.weight)
        elif ed.u == v and ed.v == v:
            out.edges[e] = Edge(new_ends[0], new_ends[1], ed.weight)
        elif ed.u == v:
            out.edges[e] = Edge(new_ends[0], ed.v, ed.weight)
        else:
            out.edges[e] = Edge(ed.u, new_ends[0], ed.weight)
    return out


def insert_gate_into_gate(outer: Gate, v, gate: Gate, tag=None) -> Gate:
    return Gate(insert_gate(outer.graph, v, gate, tag), outer.dangling)


def flatten(graph: SignatureGraph, library: dict, max_rounds: int = 10) -> SignatureGraph:
    """Insert ``library[name]`` for every vertex carrying builtin ``name``."""
    g = graph
    for _ in range(max_rounds):
        targets = [v for v, s in g.sig.items() if isinstance(s, Builtin) and s.name in library]
        if not targets:
            return g
        for v in targets:
            g = insert_gate(g, v, library[g.sig[v].name])
    raise GraphError("flattening did not terminate")


def flatten_gate(gate: Gate, library: dict) -> Gate:
    return Gate(flatten(gate.graph, library), gate.dangling)


@dataclass
class LinearCombination:
    terms: list
    target_arity: int
    target: Signature | None = None

    def __post_init__(self):
        clean = []
        for c, f in self.terms:
            if f.arity != self.target_arity:
                raise ArityError("constituent arity differs from the target arity")
            clean.append((as_scalar(c), f))
        self.terms = clean

    def constituent_signature(self, i: int) -> Signature:
        f = self.terms[i][1]
        return gate_signature(f) if isinstance(f, Gate) else f

    def evaluate(self, bits) -> Scalar:
        total = Scalar(0)
        for i, (c, _) in enumerate(self.terms):
            total = total + c * self.constituent_signature(i)(bits)
        return total

    def signature(self) -> DenseTable:
        d = self.target_arity
        vals = [Scalar(0)] * (1 << d)
        for i, (c, _) in enumerate(self.terms):
            for bits, x in self.constituent_signature(i).support():
                idx = bits_to_index(bits)
                vals[idx] = vals[idx] + c * x
        return DenseTable(tuple(vals))


def expand_combination(omega: SignatureGraph, sites: Sequence) -> list:
    """Branch graphs for vertices carrying linear combinations.

    Returns ``[(coefficient, graph, theta)]`` for every theta in the product
    of term indices; sum of coefficient * Holant(graph) equals Holant(omega).
    """
    for v, lc in sites:
        if omega.sig[v].arity != lc.target_arity:
            raise ArityError(f"site {v!r} has arity {omega.sig[v].arity}, combination {lc.target_arity}")
    ranges = [range(len(lc.terms)) for _, lc in sites]
    out = []
    for theta in itertools.product(*ranges):
        g = omega.copy()
        coef = Scalar(1)
        for (v, lc), t in zip(sites, theta):
            c, f = lc.terms[t]
            coef = coef * c
            if isinstance(f, Gate):
                g = insert_gate(g, v, f)
            else:
                g.sig[v] = f
        out.append((coef, g, theta))
    return out
