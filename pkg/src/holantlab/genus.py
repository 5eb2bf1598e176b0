"""PerfMatch of surface-embedded graphs given as plane models.

A plane model draws the graph inside a polygon.  Each bunch edge leaves the
polygon through one side and re-enters through its partner side; the part
of the edge outside the polygon is represented by two stubs.  Outside the
polygon, the stubs are joined again by wires drawn as semicircles in a
half plane; crossing wires meet in a PASS vertex.  The resulting cap gate
has signature C, which differs from the identity wiring O by a sign that
depends on the parities (handles) or Hamming weights (cross caps) of the
exit assignments.  The sign is removed by a linear combination of
reweighted copies, each evaluated by FKT.

Stub order convention: ``sides`` lists the polygon sides clockwise around
the interior.  On a side ``a`` the exits of bunch a appear in bunch order;
on ``a^-1`` the entries appear reversed; on a second occurrence of ``a``
(cross cap) the entries appear in bunch order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .gates import Gate, gate_signature, insert_gate, flatten
from .graph import GraphError, SignatureGraph, is_planar_rotation
from .matchgates import build_pass_matchgate
from .parallel import pmap
from .matching import EmbeddedGraph, from_signature_graph, perfmatch_fkt
from .scalar import I, Scalar, as_scalar
from .signatures import HW1, PASS, Builtin, DenseTable, all_inputs

ORIENTABLE = "ORIENTABLE"
PLUS_PROJECTIVE = "PLUS_PROJECTIVE"
PLUS_KLEIN = "PLUS_KLEIN"
PATTERNS = (ORIENTABLE, PLUS_PROJECTIVE, PLUS_KLEIN)
EXIT, ENTRY = "exit", "entry"


class PlaneModelError(GraphError):
    pass


class CapExpansionError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# wire layout

def _crossing_x(P, Q) -> Fraction:
    (a, b), (c, d) = P, Q
    m1, r1 = Fraction(a + b, 2), Fraction(b - a, 2)
    m2, r2 = Fraction(c + d, 2), Fraction(d - c, 2)
    return (r1 * r1 - r2 * r2 + m2 * m2 - m1 * m1) / (2 * (m2 - m1))


def _layout(ends: list, wires: dict, positions: list):
    pos = dict(zip(ends, positions))
    span = {}
    for w, (e1, e2) in wires.items():
        a, b = pos[e1], pos[e2]
        span[w] = (min(a, b), max(a, b))
    on_wire = {w: [] for w in wires}
    crossings = []
    names = list(wires)
    for p, q in itertools.combinations(names, 2):
        (a, b), (c, d) = span[p], span[q]
        if (a, c) > (c, a):
            p, q, (a, b), (c, d) = q, p, (c, d), (a, b)
        if a < c < b < d:
            x = _crossing_x((a, b), (c, d))
            k = len(crossings)
            crossings.append((p, q))
            on_wire[p].append((x, k))
            on_wire[q].append((x, k))
    for w, lst in on_wire.items():
        lst.sort()
        xs = [x for x, _ in lst]
        if len(set(xs)) != len(xs):
            return None
    return span, on_wire, crossings, pos


def wire_layout(ends: list, wires: dict):
    """Arrange semicircle wires between stub positions.

    ``ends`` lists stub keys clockwise; ``wires`` maps a wire to its two
    stub keys.  Returns (span, on_wire, crossings, pos) where on_wire[w]
    lists crossings along w in increasing position.
    """
    L = len(ends)
    # clockwise around the interior runs right to left along the axis
    positions = [L - i for i in range(L)]
    for attempt in range(50):
        res = _layout(ends, wires, positions)
        if res is not None:
            return res
        positions = [p * 7 + (i * i * (attempt + 3)) % 5 for i, p in enumerate(positions)]
    raise PlaneModelError("could not find a generic wire layout")


def cap_gate(ends: list, wires: dict, tag="cap") -> Gate:
    """Abstract gate: PASS at every crossing, relay pair on uncrossed wires.

    Dangling edges follow ``ends``.  At a crossing of P (left end further
    left) and Q, the ports N, E, S, W are P towards its right end, Q towards
    its left end, P towards its left end and Q towards its right end.
    """
    span, on_wire, crossings, pos = wire_layout(ends, wires)
    g = SignatureGraph()
    seg = lambda w, i: (tag, "seg", w, i)
    ports = {k: {} for k in range(len(crossings))}
    for w, lst in on_wire.items():
        for i, (_, k) in enumerate(lst):
            p, q = crossings[k]
            role = ("N", "S") if w == p else ("W", "E")
            ports[k][role[1]] = seg(w, i)
            ports[k][role[0]] = seg(w, i + 1)
    for k in range(len(crossings)):
        inc = [ports[k][d] for d in "NESW"]
        g.add_vertex((tag, "x", k), PASS, inc)
        g.rotation[(tag, "x", k)] = list(inc)
    dangling = {}
    for w, lst in on_wire.items():
        lo_end, hi_end = sorted(wires[w], key=lambda e: pos[e])
        if not lst:
            r1, r2, mid = (tag, "r1", w), (tag, "r2", w), (tag, "mid", w)
            g.add_vertex(r1, HW1(2), [seg(w, 0), mid])
            g.add_vertex(r2, HW1(2), [mid, seg(w, 1)])
            g.rotation[r1] = [seg(w, 0), mid]
            g.rotation[r2] = [mid, seg(w, 1)]
            g.add_edge(mid, r1, r2, 1, attach=False)
            g.add_edge(seg(w, 0), r1, None, 1, attach=False)
            g.add_edge(seg(w, 1), r2, None, 1, attach=False)
        else:
            xs = [(tag, "x", k) for _, k in lst]
            g.add_edge(seg(w, 0), xs[0], None, 1, attach=False)
            for i in range(1, len(xs)):
                g.add_edge(seg(w, i), xs[i - 1], xs[i], 1, attach=False)
            g.add_edge(seg(w, len(xs)), xs[-1], None, 1, attach=False)
        dangling[lo_end] = seg(w, 0)
        dangling[hi_end] = seg(w, max(len(lst), 1))
    return Gate(g.check(), tuple(dangling[e] for e in ends))


# ---------------------------------------------------------------------------
# cap gates and expansions

@dataclass
class CapExpansion:
    """Terms (coefficient, factor per bunch).  A factor f multiplies the
    weight of every exit edge of its bunch, contributing f^hw(x_bunch)."""

    terms: list
    kind: str = ""

    def __len__(self):
        return len(self.terms)


def _handle_ends(d1: int, d2: int):
    x1 = [("x1", j) for j in range(1, d1 + 1)]
    x2 = [("x2", j) for j in range(1, d2 + 1)]
    ends = ([(e, EXIT) for e in x1] + [(e, EXIT) for e in x2]
            + [(e, ENTRY) for e in reversed(x1)] + [(e, ENTRY) for e in reversed(x2)])
    wires = {e: ((e, EXIT), (e, ENTRY)) for e in x1 + x2}
    return ends, wires


def build_grid_cap_gate(d1: int, d2: int) -> Gate:
    """Gate on x1, x2, y1, y2 (d1 + d2 + d1 + d2 ports) with d1*d2 PASS vertices."""
    if d1 < 1 or d2 < 1:
        raise ValueError("bunch sizes must be positive")
    ends, wires = _handle_ends(d1, d2)
    return cap_gate(ends, wires)


def grid_cap_target(bits, d1: int, d2: int) -> int:
    x1, x2 = bits[:d1], bits[d1:d1 + d2]
    y1, y2 = bits[d1 + d2:2 * d1 + d2], bits[2 * d1 + d2:]
    return int(tuple(y1) == tuple(reversed(x1)) and tuple(y2) == tuple(reversed(x2)))


def grid_cap_crossing(bits, d1: int, d2: int) -> int:
    """C = (-1)^(odd(x1) odd(x2)) [y1 = x1^-1][y2 = x2^-1]."""
    o = grid_cap_target(bits, d1, d2)
    p1, p2 = sum(bits[:d1]) % 2, sum(bits[d1:d1 + d2]) % 2
    return o * (-1) ** (p1 * p2)


def grid_cap_expansion() -> CapExpansion:
    h = Fraction(1, 2)
    return CapExpansion([(Scalar(h), (1, 1)), (Scalar(h), (-1, 1)), (Scalar(h), (1, -1)),
                         (Scalar(-h), (-1, -1))], "grid")


def build_cross_cap_gate(d: int) -> Gate:
    xs = [("x", j) for j in range(1, d + 1)]
    ends = [(e, EXIT) for e in xs] + [(e, ENTRY) for e in xs]
    return cap_gate(ends, {e: ((e, EXIT), (e, ENTRY)) for e in xs})


def cross_cap_target(bits, d: int) -> int:
    return int(tuple(bits[:d]) == tuple(bits[d:]))


def cross_cap_crossing(bits, d: int) -> int:
    h = sum(bits[:d])
    return cross_cap_target(bits, d) * (-1) ** (h * (h - 1) // 2)


def cross_cap_expansion() -> CapExpansion:
    half = Fraction(1, 2)
    return CapExpansion([(Scalar(half, -half), (I,)), (Scalar(half, half), (-I,))], "cross")


def cross_cap_sign_identity(h: int) -> bool:
    """(-1)^binom(h,2) = (1-i)/2 i^h + (1+i)/2 (-i)^h."""
    lhs = Scalar((-1) ** (h * (h - 1) // 2))
    rhs = Scalar(Fraction(1, 2), Fraction(-1, 2)) * I ** h + Scalar(Fraction(1, 2), Fraction(1, 2)) * (-I) ** h
    return lhs == rhs


def _grated_ends(sizes):
    bunches = [[(b, j) for j in range(1, d + 1)] for b, d in enumerate(sizes, start=1)]
    ends = [(e, EXIT) for bl in bunches for e in bl]
    ends += [(e, ENTRY) for bl in bunches for e in reversed(bl)]
    wires = {e: ((e, EXIT), (e, ENTRY)) for bl in bunches for e in bl}
    return ends, wires


def build_grated_cross_cap_gate(sizes) -> Gate:
    """Cross cap over bunches: bunch order kept, strands of a bunch stay parallel."""
    ends, wires = _grated_ends(sizes)
    return cap_gate(ends, wires)


def grated_target(bits, sizes) -> int:
    total = sum(sizes)
    x, y = bits[:total], bits[total:]
    out, i = [], 0
    for d in sizes:
        out.extend(reversed(x[i:i + d]))
        i += d
    return int(tuple(y) == tuple(out))


def _blocks(bits, sizes):
    out, i = [], 0
    for d in sizes:
        out.append(bits[i:i + d])
        i += d
    return out


def apply_expansion(exp: CapExpansion, table: DenseTable, sizes) -> list:
    """Pointwise sum_t c_t prod_b f_{t,b}^hw(x_b) C(x, y) over all inputs."""
    out = []
    for bits in all_inputs(table.arity):
        c = table(bits)
        if c.is_zero():
            out.append(Scalar(0))
            continue
        blocks = _blocks(bits, sizes)
        total = Scalar(0)
        for coef, factors in exp.terms:
            term = coef
            for f, blk in zip(factors, blocks):
                term = term * as_scalar(f) ** sum(blk)
            total = total + term
        out.append(total * c)
    return out


def grated_cross_cap_expansion(m: int, sizes=None) -> CapExpansion:
    """Coefficients over the per-bunch {1, -1} weightings (2^m terms).

    The crossing sign of the gate is read off its signature on the identity
    wiring; it must depend only on bunch parities, and the coefficients are
    its Walsh-Hadamard transform.  Certified by exhaustive contraction.
    """
    sizes = [1] * m if sizes is None else list(sizes)
    if len(sizes) != m or m < 1:
        raise ValueError("need one positive size per bunch")
    gate = build_grated_cross_cap_gate(sizes)
    table = gate_signature(gate)
    total = sum(sizes)
    sign_of_parity: dict = {}
    for x in all_inputs(total):
        y = []
        for blk in _blocks(x, sizes):
            y.extend(reversed(blk))
        val = table(tuple(x) + tuple(y))
        if val not in (Scalar(1), Scalar(-1)):
            raise CapExpansionError(f"identity wiring {x} has value {val}")
        par = tuple(sum(b) % 2 for b in _blocks(x, sizes))
        if sign_of_parity.setdefault(par, val) != val:
            raise CapExpansionError("crossing sign is not a function of bunch parities")
    terms = []
    for s in itertools.product((1, -1), repeat=m):
        c = Scalar(0)
        for par, sigma in sign_of_parity.items():
            chi = 1
            for sj, pj in zip(s, par):
                chi *= sj ** pj
            # sigma is +-1, so 1/sigma = sigma
            c = c + sigma * chi
        terms.append((c * Fraction(1, 2 ** m), s))
    exp = CapExpansion(terms, "grated")
    got = apply_expansion(exp, table, sizes + [0] * m)
    for bits, v in zip(all_inputs(2 * total), got):
        if v != grated_target(bits, sizes):
            raise CapExpansionError(f"contraction check failed at {bits}")
    return exp


# ---------------------------------------------------------------------------
# plane models

@dataclass
class PlaneModel:
    """vertices; interior edges (id, u, v, w); bunches name -> [(id, exit, entry, w)];
    sides clockwise as (name, inverse); rotation per vertex over edge ids and
    stub ids (id, "exit") / (id, "entry")."""

    vertices: list
    edges: list
    bunches: dict
    sides: list
    pattern: str
    rotation: dict
    name: str = ""

    def bunch_of(self) -> dict:
        return {e: b for b, lst in self.bunches.items() for (e, *_rest) in lst}

    def stub_sequence(self) -> list:
        seen = set()
        out = []
        for name, inverse in self.sides:
            lst = [e for (e, *_r) in self.bunches[name]]
            if name not in seen:
                seen.add(name)
                if inverse:
                    raise PlaneModelError(f"side {name}^-1 appears before {name}")
                out += [(e, EXIT) for e in lst]
            else:
                out += [(e, ENTRY) for e in (reversed(lst) if inverse else lst)]
        return out

    def caps(self) -> list:
        """[("handle", a, b)] and [("cross", a)] in side order, validated against the pattern."""
        s = self.sides
        caps, i = [], 0
        while i < len(s):
            if (i + 3 < len(s) and not s[i][1] and not s[i + 1][1] and s[i + 2] == (s[i][0], True)
                    and s[i + 3] == (s[i + 1][0], True) and s[i][0] != s[i + 1][0]):
                caps.append(("handle", s[i][0], s[i + 1][0]))
                i += 4
            elif i + 1 < len(s) and not s[i][1] and s[i + 1] == (s[i][0], False):
                caps.append(("cross", s[i][0]))
                i += 2
            else:
                raise PlaneModelError(f"side sequence does not follow a normal form at position {i}")
        names = [n for c in caps for n in c[1:]]
        if len(set(names)) != len(names) or set(names) != set(self.bunches):
            raise PlaneModelError("every bunch must own exactly one side pair")
        crosses = [c for c in caps if c[0] == "cross"]
        handles_first = all(c[0] == "handle" for c in caps[:len(caps) - len(crosses)])
        want = {ORIENTABLE: 0, PLUS_PROJECTIVE: 1, PLUS_KLEIN: 2}.get(self.pattern)
        if want is None:
            raise PlaneModelError(f"unknown pattern {self.pattern!r}")
        if len(crosses) != want or not handles_first:
            raise PlaneModelError(f"pattern {self.pattern} needs {want} cross caps after the handles")
        return caps

    @property
    def genus(self) -> int:
        return sum(1 for c in self.caps() if c[0] == "handle")

    def constituent_count(self) -> int:
        n = 1
        for c in self.caps():
            n *= 4 if c[0] == "handle" else 2
        return n

    def graph(self) -> EmbeddedGraph:
        edges = [(u, v, w) for (_, u, v, w) in self.edges]
        for lst in self.bunches.values():
            edges += [(u, v, w) for (_, u, v, w) in lst]
        return EmbeddedGraph(list(self.vertices), edges, None)

    def _interior_ends(self) -> dict:
        ends = {e: (u, v) for (e, u, v, _) in self.edges}
        for lst in self.bunches.values():
            for (e, u, v, _) in lst:
                ends[(e, EXIT)] = (u, "__outer__")
                ends[(e, ENTRY)] = (v, "__outer__")
        return ends

    def check(self) -> None:
        self.caps()
        ends = self._interior_ends()
        inc: dict = {v: [] for v in self.vertices}
        for e, (u, v) in ends.items():
            inc[u].append(e)
            if v != "__outer__":
                inc[v].append(e)
        for v in self.vertices:
            if sorted(map(repr, self.rotation.get(v, []))) != sorted(map(repr, inc[v])):
                raise PlaneModelError(f"rotation at {v!r} does not list its edges and stubs")
        rot = {v: list(self.rotation[v]) for v in self.vertices}
        rot["__outer__"] = list(reversed(self.stub_sequence()))
        if not is_planar_rotation(rot, ends):
            raise PlaneModelError("interior drawing with the polygon boundary is not planar")

    def cap_gate(self) -> Gate:
        """Cap gate indexed by the stub sequence.

        Seen from outside the polygon the stubs run counterclockwise, so the
        gate is drawn on the reversed sequence and its labels reversed back.
        """
        seq = self.stub_sequence()
        wires = {e: ((e, EXIT), (e, ENTRY)) for lst in self.bunches.values() for (e, *_r) in lst}
        gate = cap_gate(seq[::-1], wires)
        return Gate(gate.graph, gate.dangling[::-1])


def _expansions(model: PlaneModel) -> list:
    """One (CapExpansion, bunch names) per cap."""
    out = []
    for cap in model.caps():
        if cap[0] == "handle":
            out.append((grid_cap_expansion(), cap[1:]))
        else:
            out.append((cross_cap_expansion(), cap[1:]))
    return out


def constituent_graph(model: PlaneModel, factors: dict, gate: Gate | None = None) -> SignatureGraph:
    """Planar HW=1 graph: interior, stub edges to the cap gate, PASS flattened."""
    gate = model.cap_gate() if gate is None else gate
    seq = model.stub_sequence()
    g = SignatureGraph()
    inc: dict = {v: [] for v in model.vertices}
    bunch = model.bunch_of()
    wmap = {}
    for (e, u, v, w) in model.edges:
        inc[u].append(e)
        inc[v].append(e)
        wmap[e] = (u, v, w)
    for lst in model.bunches.values():
        for (e, u, v, w) in lst:
            inc[u].append((e, EXIT))
            inc[v].append((e, ENTRY))
            wmap[(e, EXIT)] = (u, "O", as_scalar(w) * as_scalar(factors[bunch[e]]))
            wmap[(e, ENTRY)] = (v, "O", 1)
    for v in model.vertices:
        g.add_vertex(v, HW1(len(inc[v])), inc[v])
        g.rotation[v] = list(model.rotation[v])
    g.add_vertex("O", Builtin("EVEN", len(seq)), list(seq))
    g.rotation["O"] = list(reversed(seq))
    for e, (u, v, w) in wmap.items():
        g.add_edge(e, u, v, w, attach=False)
    g = insert_gate(g, "O", gate)
    return flatten(g, {"PASS": build_pass_matchgate().gate})


@dataclass
class GenusResult:
    value: Scalar
    constituents: int
    fkt_calls: int
    terms: list = field(default_factory=list)


def _constituent_value(item):
    model, factors, gate = item
    g = constituent_graph(model, factors, gate)
    return perfmatch_fkt(from_signature_graph(g, require_embedding=True))


def genus_perfmatch(model: PlaneModel, check: bool = True, jobs: int = 1) -> GenusResult:
    """sum over cap expansions of coefficient * FKT(constituent)."""
    if check:
        model.check()
    exps = _expansions(model)
    gate = model.cap_gate()
    plan = []
    for choice in itertools.product(*(range(len(x)) for x, _ in exps)):
        coef = Scalar(1)
        factors = {}
        for (exp, names), t in zip(exps, choice):
            c, fs = exp.terms[t]
            coef = coef * c
            for name, f in zip(names, fs):
                factors[name] = f
        plan.append((choice, coef, factors))
    values = pmap(_constituent_value, [(model, f, gate) for _, _, f in plan], jobs)
    total = Scalar(0)
    terms = []
    for (choice, coef, _), pm in zip(plan, values):
        terms.append((choice, coef, pm))
        total = total + coef * pm
    real = all(Scalar.coerce(w).im == 0 for _, _, _, w in model.edges) and all(
        Scalar.coerce(w).im == 0 for b in model.bunches.values() for _, _, _, w in b)
    if real and total.im != 0:
        raise ArithmeticError(f"genus PerfMatch has imaginary part {total.im}")
    return GenusResult(total, len(terms), len(values), terms)


# ---------------------------------------------------------------------------
# model builders

def caps_sides(handles: int, crosscaps: int, prefix="a") -> tuple[list, str]:
    """Side list in normal form and the matching pattern name."""
    if crosscaps not in (0, 1, 2):
        raise ValueError("normal forms carry at most two cross caps")
    sides, k = [], 0
    for _ in range(handles):
        a, b = f"{prefix}{k + 1}", f"{prefix}{k + 2}"
        sides += [(a, False), (b, False), (a, True), (b, True)]
        k += 2
    for _ in range(crosscaps):
        a = f"{prefix}{k + 1}"
        sides += [(a, False), (a, False)]
        k += 1
    return sides, (ORIENTABLE, PLUS_PROJECTIVE, PLUS_KLEIN)[crosscaps]


def toroidal_grid_model(rows: int, cols: int, weight=lambda: 1, drop=()) -> PlaneModel:
    """rows x cols grid with wrap-around edges; vertical wraps form bunch
    "a1" (top side), horizontal wraps bunch "a2" (right side).  Interior
    edges listed in ``drop`` are omitted."""
    if rows < 2 or cols < 2:
        raise ValueError("toroidal grid needs at least 2 rows and 2 columns")
    drop = set(drop)
    verts = [(i, j) for i in range(rows) for j in range(cols)]
    edges = []
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols and ("h", i, j) not in drop:
                edges.append((("h", i, j), (i, j), (i, j + 1), weight()))
            if i + 1 < rows and ("v", i, j) not in drop:
                edges.append((("v", i, j), (i, j), (i + 1, j), weight()))
    present = {e for (e, *_r) in edges}
    vw = [(("V", j), (0, j), (rows - 1, j), weight()) for j in range(cols)]
    hw = [(("H", i), (i, cols - 1), (i, 0), weight()) for i in range(rows)]
    rot = {}
    for i in range(rows):
        for j in range(cols):
            n = ("v", i - 1, j) if i > 0 else (("V", j), EXIT)
            e = ("h", i, j) if j + 1 < cols else (("H", i), EXIT)
            s = ("v", i, j) if i + 1 < rows else (("V", j), ENTRY)
            w = ("h", i, j - 1) if j > 0 else (("H", i), ENTRY)
            rot[(i, j)] = [x for x in (n, e, s, w) if isinstance(x[1], str) or x in present]
    sides, pattern = caps_sides(1, 0)
    return PlaneModel(verts, edges, {"a1": vw, "a2": hw}, sides, pattern, rot, f"torus{rows}x{cols}")


def random_plane_model(rng, n: int, handles: int = 1, crosscaps: int = 0, max_bunch: int = 2,
                       weight=None, tries: int = 200, chord_prob: float = 0.2) -> PlaneModel:
    """Random model: stubs hung in distinct corners of one face of a random
    planar rotation, labelled in normal-form order."""
    from .generators import _faces, random_planar_rotation, random_weight
    weight = weight or (lambda: random_weight(rng))
    sides, pattern = caps_sides(handles, crosscaps)
    names = []
    for s, _ in sides:
        if s not in names:
            names.append(s)
    for _ in range(tries):
        sizes = {b: rng.randint(1, max_bunch) for b in names}
        L = 2 * sum(sizes.values())
        nbr = random_planar_rotation(n, rng, chord_prob)
        faces = sorted(_faces(nbr), key=len, reverse=True)
        if not faces:
            continue
        face = faces[0]
        if not face:
            continue
        eid = {}
        for u in nbr:
            for v in nbr[u]:
                eid.setdefault(frozenset((u, v)), ("e", len(eid)))
        ends = {e: tuple(uv) for uv, e in eid.items()}
        # several stubs may share a corner; they keep face order inside it
        picks = sorted(rng.randrange(len(face)) for _ in range(L))
        stubs = [("s", k) for k in range(L)]
        stub_at = {("s", k): face[idx][1] for k, idx in enumerate(picks)}
        for s_, b in stub_at.items():
            ends[s_] = (b, "__outer__")
        cw = None
        for within in (1, 0):
            rot = {u: [eid[frozenset((u, v))] for v in nbr[u]] for u in nbr}
            last = {}
            for k, idx in enumerate(picks):
                a, b = face[idx]
                r = rot[b]
                anchor = last.get(idx)
                if anchor is None or not within:
                    r.insert(r.index(eid[frozenset((a, b))]) + 1, ("s", k))
                else:
                    r.insert(r.index(anchor) + 1, ("s", k))
                last[idx] = ("s", k)
            for cand in (stubs, stubs[::-1]):
                r2 = dict(rot)
                r2["__outer__"] = list(reversed(cand))
                if is_planar_rotation(r2, ends):
                    cw = cand
                    break
            if cw is not None:
                break
        if cw is None:
            continue
        off = rng.randrange(L)
        cw = cw[off:] + cw[:off]
        bunches = {b: [((b, j), None, None, weight()) for j in range(sizes[b])] for b in names}
        probe = PlaneModel(list(nbr), [], bunches, sides, pattern, {})
        label = dict(zip(cw, probe.stub_sequence()))
        where = {label[s]: stub_at[s] for s in stubs}
        bunches = {b: [(e, where[(e, EXIT)], where[(e, ENTRY)], w) for (e, _, _, w) in lst]
                   for b, lst in bunches.items()}
        if any(u == v for lst in bunches.values() for (_, u, v, _) in lst):
            continue
        edges = [(e, u, v, weight()) for uv, e in eid.items() for u, v in [tuple(uv)]]
        rotation = {v: [label.get(x, x) for x in r] for v, r in rot.items()}
        model = PlaneModel(list(nbr), edges, bunches, sides, pattern, rotation,
                           f"random-g{handles}-c{crosscaps}")
        model.check()
        return model
    raise PlaneModelError("could not place stubs; try a larger graph")


def search_rotation(model: PlaneModel, limit: int = 1 << 16) -> PlaneModel:
    """Fill in a rotation system making the model valid, by exhaustive search."""
    ends = model._interior_ends()
    inc: dict = {v: [] for v in model.vertices}
    for e, (u, v) in ends.items():
        inc[u].append(e)
        if v != "__outer__":
            inc[v].append(e)
    choices = []
    for v in model.vertices:
        first, rest = inc[v][:1], inc[v][1:]
        choices.append([first + list(p) for p in itertools.permutations(rest)])
    for count, combo in enumerate(itertools.product(*choices)):
        if count >= limit:
            break
        model.rotation = dict(zip(model.vertices, combo))
        try:
            model.check()
            return model
        except PlaneModelError:
            continue
    raise PlaneModelError("no rotation system found")


def k33_model(surface: str) -> PlaneModel:
    """K3,3 drawn on the torus ("torus") or the projective plane ("projective")."""
    A, B = ["a1", "a2", "a3"], ["b1", "b2", "b3"]
    all_edges = [(f"{a}{b}", a, b) for a in A for b in B]
    for pair in itertools.combinations(range(9), 2):
        out = [all_edges[i] for i in pair]
        inner = [(e, u, v, 1) for i, (e, u, v) in enumerate(all_edges) if i not in pair]
        if surface == "torus":
            bunches = {"x1": [(out[0][0], out[0][1], out[0][2], 1)],
                       "x2": [(out[1][0], out[1][1], out[1][2], 1)]}
            sides = [("x1", False), ("x2", False), ("x1", True), ("x2", True)]
            pattern = ORIENTABLE
        elif surface == "projective":
            bunches = {"x1": [(e, u, v, 1) for (e, u, v) in out]}
            sides = [("x1", False), ("x1", False)]
            pattern = PLUS_PROJECTIVE
        else:
            raise ValueError(f"unknown surface {surface!r}")
        model = PlaneModel(A + B, inner, bunches, sides, pattern, {}, f"K33-{surface}")
        try:
            return search_rotation(model)
        except PlaneModelError:
            continue
    raise PlaneModelError("no K3,3 model found")
