"""Concrete matchgates for PASS, PRE and ACT, plus the dummy gate.

Gadget wiring
-------------
PASS: a 2x4 grid fragment on vertices p0..p7 (top row p0..p3, bottom row
p4..p7) with nine edges, one of weight -1.  Terminals N=p0, E=p1, S=p3,
W=p7 sit on the outer face in clockwise order.  Found by exhaustive search
over {-1, 0, 1} weightings of the grid template; bipartite with terminal
colours N0 E1 S1 W0.

PRE: the PASS core with a 4-vertex tap path in front of N and of S.  The
tap t - t' - c - a routes an active outer edge either through to the core
(t' matched by the core edge) or sideways to the apex port at a.  The top
tap feeds apex port 6, the bottom tap feeds port 5.

ACT: a PRE vertex whose four spokes each pass through a PASS vertex; the
four PASS vertices are joined in a ring, and a separate K2 carries the
weight-1/2 edge.  The ring is active or inactive as a whole; the two cases
contribute (1/2)(-1)^hw(x) PRE(xy) and (1/2) PRE(xy).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .gates import Gate, flatten_gate, gate_signature
from .graph import SignatureGraph
from .scalar import Scalar
from .signatures import ACT, HW1, PASS, PRE, Builtin, DenseTable, Signature, all_inputs, bits_str


@dataclass
class NamedMatchgate:
    name: str
    gate: Gate
    target: Signature
    apex_dangling: tuple = ()
    abstract: Gate | None = None  # unflattened form when the gadget is composite


@dataclass
class VerifyReport:
    name: str
    total: int
    mismatches: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        return f"{self.total - len(self.mismatches)}/{self.total} inputs match"


# edges of the PASS core: (u, v, weight)
PASS_CORE_EDGES = (
    (0, 1, 1), (0, 4, 1), (1, 2, 1), (2, 3, 1), (2, 6, -1),
    (3, 7, 1), (4, 5, 1), (5, 6, 1), (6, 7, 1),
)
# clockwise rotation at each core vertex; "N", "E", "S", "W" are the ports
PASS_CORE_ROTATION = {
    0: ["N", 1, 4],
    1: ["E", 2, 0],
    2: [3, 6, 1],
    3: ["S", 7, 2],
    4: [0, 5],
    5: [6, 4],
    6: [2, 7, 5],
    7: [3, "W", 6],
}
PASS_PORTS = {"N": 0, "E": 1, "S": 3, "W": 7}


def _add_pass_core(g: SignatureGraph, prefix: str, ports: dict) -> None:
    """Add the PASS core with vertex ids prefix+str(i).

    ``ports`` maps "N"/"E"/"S"/"W" to the edge id to attach at that port;
    those edges must be created by the caller afterwards.
    """
    vid = lambda i: f"{prefix}{i}"
    core_edges = {}
    for u, v, w in PASS_CORE_EDGES:
        core_edges[frozenset((u, v))] = (f"{prefix}{u}-{v}", w)
    for i, rot in PASS_CORE_ROTATION.items():
        lst = []
        for item in rot:
            if isinstance(item, str):
                lst.append(ports[item])
            else:
                lst.append(core_edges[frozenset((i, item))][0])
        g.add_vertex(vid(i), HW1(len(lst)), lst)
        g.rotation[vid(i)] = list(lst)
    for (u, v, w) in PASS_CORE_EDGES:
        e, _ = core_edges[frozenset((u, v))]
        g.add_edge(e, vid(u), vid(v), w, attach=False)


@lru_cache(maxsize=None)
def build_pass_matchgate() -> NamedMatchgate:
    g = SignatureGraph()
    ports = {p: f"d{p}" for p in "NESW"}
    _add_pass_core(g, "p", ports)
    for p in "NESW":
        g.add_edge(ports[p], f"p{PASS_PORTS[p]}", None, 1, attach=False)
    gate = Gate(g.check(), tuple(ports[p] for p in "NESW"))
    return NamedMatchgate("GAMMA_PASS", gate, PASS)


def _add_tap(g: SignatureGraph, name: str, outer_edge, core_edge, apex_edge) -> None:
    """Path t - t' - c - a; t holds the outer edge, t' the core edge, a the apex edge."""
    t, tp, c, a = (f"{name}{s}" for s in ("t", "t'", "c", "a"))
    e1, e2, e3 = f"{name}:t-t'", f"{name}:t'-c", f"{name}:c-a"
    g.add_vertex(t, HW1(2), [outer_edge, e1])
    g.add_vertex(tp, HW1(3), [e1, e2, core_edge])
    g.add_vertex(c, HW1(2), [e2, e3])
    g.add_vertex(a, HW1(2), [e3, apex_edge])
    # t' sits between the outer terminal and the core; c and a hang off to
    # the side inside a face, with the apex edge pointing into that face
    g.rotation[t] = [outer_edge, e1]
    g.rotation[tp] = [e1, e2, core_edge]
    g.rotation[c] = [e2, e3]
    g.rotation[a] = [e3, apex_edge]
    for e, u, v in ((e1, t, tp), (e2, tp, c), (e3, c, a)):
        g.add_edge(e, u, v, 1, attach=False)


@lru_cache(maxsize=None)
def build_pre_matchgate() -> NamedMatchgate:
    g = SignatureGraph()
    ports = {"N": "coreN", "E": "dE", "S": "coreS", "W": "dW"}
    _add_pass_core(g, "p", ports)
    _add_tap(g, "top", "dN", "coreN", "d6")
    _add_tap(g, "bot", "dS", "coreS", "d5")
    g.add_edge("coreN", "topt'", "p0", 1, attach=False)
    g.add_edge("coreS", "bott'", "p3", 1, attach=False)
    g.add_edge("dN", "topt", None, 1, attach=False)
    g.add_edge("dS", "bott", None, 1, attach=False)
    g.add_edge("dE", "p1", None, 1, attach=False)
    g.add_edge("dW", "p7", None, 1, attach=False)
    g.add_edge("d5", "bota", None, 1, attach=False)
    g.add_edge("d6", "topa", None, 1, attach=False)
    gate = Gate(g.check(), ("dN", "dE", "dS", "dW", "d5", "d6"))
    return NamedMatchgate("GAMMA_PRE", gate, PRE, apex_dangling=(5, 6))


# Ring vertices of the ACT gadget.  For each one: which PASS port holds the
# outer edge, the spoke to the centre, the incoming ring edge and the
# outgoing ring edge (ring traversed clockwise N -> E -> S -> W -> N), and
# the clockwise port order as seen in the drawing.  The choice keeps the
# flattened gadget bipartite.
_RING = {
    "N": {"outer": "N", "spoke": "S", "in": "W", "out": "E", "cw": "NESW"},
    "E": {"outer": "E", "spoke": "W", "in": "N", "out": "S", "cw": "NESW"},
    "S": {"outer": "E", "spoke": "W", "in": "N", "out": "S", "cw": "WNES"},
    "W": {"outer": "N", "spoke": "S", "in": "W", "out": "E", "cw": "ESWN"},
}
_NEXT = {"N": "E", "E": "S", "S": "W", "W": "N"}
_PREV = {v: k for k, v in _NEXT.items()}


def _act_abstract_gate() -> Gate:
    g = SignatureGraph()
    g.add_vertex("pre", PRE, ["spokeN", "spokeE", "spokeS", "spokeW", "d5", "d6"])
    g.rotation["pre"] = ["spokeN", "spokeE", "spokeS", "spokeW"]
    for side, spec in _RING.items():
        port_edge = {
            spec["outer"]: f"d{side}",
            spec["spoke"]: f"spoke{side}",
            spec["in"]: f"ring{_PREV[side]}{side}",
            spec["out"]: f"ring{side}{_NEXT[side]}",
        }
        r = f"r{side}"
        g.add_vertex(r, PASS, [port_edge[p] for p in "NESW"])
        # clockwise in the drawing: outer side first for N, then around
        g.rotation[r] = [port_edge[p] for p in spec["cw"]]
    for side in "NESW":
        g.add_edge(f"spoke{side}", f"r{side}", "pre", 1, attach=False)
        g.add_edge(f"ring{side}{_NEXT[side]}", f"r{side}", f"r{_NEXT[side]}", 1, attach=False)
        g.add_edge(f"d{side}", f"r{side}", None, 1, attach=False)
    g.add_edge("d5", "pre", None, 1, attach=False)
    g.add_edge("d6", "pre", None, 1, attach=False)
    g.add_vertex("k2a", HW1(1), ["half"])
    g.add_vertex("k2b", HW1(1), ["half"])
    g.rotation["k2a"] = ["half"]
    g.rotation["k2b"] = ["half"]
    g.add_edge("half", "k2a", "k2b", Fraction(1, 2), attach=False)
    return Gate(g.check(), ("dN", "dE", "dS", "dW", "d5", "d6"))


def matchgate_library() -> dict:
    """Builtin name -> flat matchgate, used by ``flatten``."""
    return {
        "PASS": build_pass_matchgate().gate,
        "PRE": build_pre_matchgate().gate,
        "ACT": build_act_gate().gate,
    }


@lru_cache(maxsize=None)
def build_act_gate() -> NamedMatchgate:
    abstract = _act_abstract_gate()
    lib = {"PASS": build_pass_matchgate().gate, "PRE": build_pre_matchgate().gate}
    flat = flatten_gate(abstract, lib)
    return NamedMatchgate("GAMMA_ACT", flat, ACT, apex_dangling=(5, 6), abstract=abstract)


def _dummy_abstract_gate() -> Gate:
    g = SignatureGraph()
    g.add_vertex("pre", PRE, ["dN", "west", "dS", "east", "d5", "d6"])
    g.rotation["pre"] = ["dN", "west", "dS", "east"]
    for side, e in (("W", "west"), ("E", "east")):
        g1, g2, link = f"g1{side}", f"g2{side}", f"pend{side}"
        g.add_vertex(g1, HW1(2), [e, link])
        g.add_vertex(g2, HW1(1), [link])
        g.rotation[g1] = [e, link]
        g.rotation[g2] = [link]
        g.add_edge(e, "pre", g1, 1, attach=False)
        g.add_edge(link, g1, g2, 1, attach=False)
    for e in ("dN", "dS", "d5", "d6"):
        g.add_edge(e, "pre", None, 1, attach=False)
    return Gate(g.check(), ("dN", "dS", "d5", "d6"))


def dummy_target() -> DenseTable:
    """PRE with W = E = 0, restricted to (N, S, 5, 6)."""
    vals = []
    for n_, s_, a5, a6 in all_inputs(4):
        vals.append(PRE((n_, 0, s_, 0, a5, a6)))
    return DenseTable(tuple(vals))


@lru_cache(maxsize=None)
def build_dummy_gate() -> NamedMatchgate:
    abstract = _dummy_abstract_gate()
    flat = flatten_gate(abstract, {"PRE": build_pre_matchgate().gate})
    return NamedMatchgate("DUMMY", flat, dummy_target(), apex_dangling=(3, 4), abstract=abstract)


NAMED_BUILDERS = {
    "GAMMA_PASS": build_pass_matchgate,
    "GAMMA_PRE": build_pre_matchgate,
    "GAMMA_ACT": build_act_gate,
    "DUMMY": build_dummy_gate,
}


def verify_matchgate(m: NamedMatchgate) -> VerifyReport:
    sig = gate_signature(m.gate)
    d = m.target.arity
    rep = VerifyReport(m.name, 1 << d)
    for bits in all_inputs(d):
        got, want = sig(bits), m.target(bits)
        rep.rows.append((bits_str(bits), got, want))
        if got != want:
            rep.mismatches.append((bits_str(bits), got, want))
    return rep


def is_matchgate(gate: Gate) -> bool:
    return all(isinstance(s, Builtin) and s.name == "HW=1" for s in gate.graph.sig.values())


def two_colouring(graph: SignatureGraph) -> dict | None:
    """Proper 2-colouring of the non-dangling part, or None."""
    adj: dict = {v: [] for v in graph.sig}
    for ed in graph.edges.values():
        if ed.v is not None:
            adj[ed.u].append(ed.v)
            adj[ed.v].append(ed.u)
    colour: dict = {}
    for s in graph.sig:
        if s in colour:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
                elif colour[y] == colour[x]:
                    return None
    return colour


def terminal_colours(gate: Gate) -> tuple | None:
    col = two_colouring(gate.graph)
    if col is None:
        return None
    return tuple(col[gate.graph.edges[e].u] for e in gate.dangling)
