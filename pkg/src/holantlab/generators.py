"""Random instance generators with planar witnesses built combinatorially."""

from __future__ import annotations

import random
from fractions import Fraction

from .graph import euler_genus
from .matching import EmbeddedGraph
from .scalar import Scalar


def _faces(rot: dict) -> list[list[tuple]]:
    """Faces of a simple graph given by neighbour rotations; darts (u, v)."""
    seen = set()
    faces = []
    for u in rot:
        for v in rot[u]:
            if (u, v) in seen:
                continue
            face = []
            d = (u, v)
            while d not in seen:
                seen.add(d)
                face.append(d)
                a, b = d
                rb = rot[b]
                d = (b, rb[(rb.index(a) + 1) % len(rb)])
            faces.append(face)
    return faces


def _to_embedded(rot: dict, weight) -> EmbeddedGraph:
    verts = list(rot)
    edges, index = [], {}
    for u in verts:
        for v in rot[u]:
            if (v, u) not in index:
                index[(u, v)] = len(edges)
                edges.append((u, v, weight()))
    eid = lambda u, v: index.get((u, v), index.get((v, u)))
    rotation = {u: [eid(u, v) for v in rot[u]] for u in verts}
    return EmbeddedGraph(verts, edges, rotation)


def random_planar_rotation(n: int, rng: random.Random, chord_prob: float = 0.5) -> dict:
    """Connected simple planar graph on vertices 0..n-1 as neighbour rotations."""
    rot: dict = {0: []}
    if n == 1:
        return rot
    rot[0] = [1]
    rot[1] = [0]
    for x in range(2, n):
        faces = _faces(rot)
        face = rng.choice(faces)
        corners = []
        seen_v = set()
        for (a, b) in face:
            # corner at b between the incoming dart from a and the outgoing dart
            if b not in seen_v:
                seen_v.add(b)
                corners.append((b, a))
        k = rng.randint(1, min(3, len(corners)))
        start = rng.randrange(len(corners))
        chosen = sorted(rng.sample(range(len(corners)), k))
        picked = [corners[(start + i) % len(corners)] for i in chosen]
        rot[x] = []
        for (b, a) in picked:
            rb = rot[b]
            rb.insert(rb.index(a) + 1, x)
        for order in (list(reversed(picked)), picked):
            rot[x] = [b for b, _ in order]
            if _genus(rot) == 0:
                break
        else:
            raise AssertionError("generator failed to keep planarity")
        if rng.random() < chord_prob:
            _add_chord(rot, rng)
    return rot


def _add_chord(rot: dict, rng: random.Random) -> None:
    faces = [f for f in _faces(rot) if len(f) >= 4]
    if not faces:
        return
    face = rng.choice(faces)
    corners = [(b, a) for (a, b) in face]
    for _ in range(10):
        (b1, a1), (b2, a2) = rng.sample(corners, 2)
        if b1 == b2 or b2 in rot[b1]:
            continue
        r1, r2 = rot[b1], rot[b2]
        r1.insert(r1.index(a1) + 1, b2)
        r2.insert(r2.index(a2) + 1, b1)
        if _genus(rot) == 0:
            return
        r1.remove(b2)
        r2.remove(b1)


def _genus(rot: dict) -> int:
    ends, index = {}, {}
    for u in rot:
        for v in rot[u]:
            if (v, u) not in index:
                index[(u, v)] = len(ends)
                ends[len(ends)] = (u, v)
    eid = lambda u, v: index.get((u, v), index.get((v, u)))
    return euler_genus({u: [eid(u, v) for v in rot[u]] for u in rot}, ends)


def random_weight(rng: random.Random, gaussian: bool = False):
    num = rng.choice([-3, -2, -1, 1, 1, 1, 2, 3])
    den = rng.choice([1, 1, 1, 2, 3])
    w = Fraction(num, den)
    if gaussian and rng.random() < 0.5:
        return Scalar(w, Fraction(rng.choice([-2, -1, 1, 2]), rng.choice([1, 2])))
    return w


def random_planar_graph(n: int, rng: random.Random, gaussian: bool = False, unit: bool = False,
                        chord_prob: float = 0.5) -> EmbeddedGraph:
    rot = random_planar_rotation(n, rng, chord_prob)
    weight = (lambda: 1) if unit else (lambda: random_weight(rng, gaussian))
    return _to_embedded(rot, weight)


def grid_graph(rows: int, cols: int, weight=lambda: 1) -> EmbeddedGraph:
    rot = {}
    for i in range(rows):
        for j in range(cols):
            nb = []
            for di, dj in ((-1, 0), (0, 1), (1, 0), (0, -1)):
                a, b = i + di, j + dj
                if 0 <= a < rows and 0 <= b < cols:
                    nb.append((a, b))
            rot[(i, j)] = nb
    return _to_embedded(rot, weight)


def random_apex_graph(n_planar: int, n_apex: int, rng: random.Random, gaussian: bool = False) -> tuple:
    """Planar graph plus apex vertices joined to random vertices."""
    g = random_planar_graph(n_planar, rng, gaussian)
    verts = list(g.vertices)
    edges = list(g.edges)
    apices = [("apex", i) for i in range(n_apex)]
    for a in apices:
        k = rng.randint(1, min(4, n_planar))
        for v in rng.sample(range(n_planar), k):
            edges.append((a, v, random_weight(rng, gaussian)))
    if n_apex >= 2 and rng.random() < 0.5:
        edges.append((apices[0], apices[1], random_weight(rng, gaussian)))
    rotation = dict(g.rotation)
    return EmbeddedGraph(verts + apices, edges, rotation), apices


def random_table(rng: random.Random, arity: int, density: float = 0.85, gaussian: bool = False):
    from .signatures import DenseTable
    vals = [random_weight(rng, gaussian) if rng.random() < density else 0 for _ in range(1 << arity)]
    return DenseTable(tuple(vals))


def random_signature_graph(rng: random.Random, n: int, max_edges: int = 10, dangling: int = 0,
                           gaussian: bool = False):
    """Random multigraph (loops allowed) with dense random signatures.

    ``dangling`` extra edges get one endpoint only; they are returned in
    creation order so the result can be wrapped as a gate.
    """
    from .graph import SignatureGraph
    g = SignatureGraph()
    inc = {v: [] for v in range(n)}
    ends = {}
    m = rng.randint(max(1, n - 1), max(n - 1, max_edges))
    for i in range(m):
        u, v = rng.randrange(n), rng.randrange(n)
        ends[("e", i)] = (u, v, random_weight(rng, gaussian) if rng.random() < 0.3 else 1)
        inc[u].append(("e", i))
        inc[v].append(("e", i))
    dang = []
    for i in range(dangling):
        u = rng.randrange(n)
        ends[("d", i)] = (u, None, 1)
        inc[u].append(("d", i))
        dang.append(("d", i))
    for v in range(n):
        rng.shuffle(inc[v])
        g.add_vertex(v, random_table(rng, len(inc[v]), gaussian=gaussian), inc[v])
    for e, (u, v, w) in ends.items():
        g.add_edge(e, u, v, w, attach=False)
    return g.check(), dang


def random_gate(rng: random.Random, arity: int, n: int = 3, max_edges: int = 5, gaussian: bool = False):
    from .gates import Gate
    g, dang = random_signature_graph(rng, n, max_edges, arity, gaussian)
    return Gate(g, tuple(dang))
