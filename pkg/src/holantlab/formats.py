"""JSON file formats (see FORMATS.md for the byte-level description)."""

from __future__ import annotations

import json
from pathlib import Path

from .gates import Gate
from .graph import SignatureGraph
from .gridtiling import ColoredGraph, GridTilingInstance, PartitionedSubInstance
from .matching import EmbeddedGraph
from .scalar import Scalar
from .signatures import Builtin, CellSignature, DenseTable, Signature, bits_str, bits_to_index, parse_bits

VERSION = 1


class FormatError(ValueError):
    """Malformed document; ``where`` is a JSON path or "line L column C"."""

    def __init__(self, msg: str, where: str = ""):
        super().__init__(f"{where}: {msg}" if where else msg)
        self.where = where


# ---------------------------------------------------------------------------
# primitives

def encode_id(x):
    if isinstance(x, tuple):
        return [encode_id(y) for y in x]
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    raise FormatError(f"id {x!r} is not serializable")


def decode_id(x, where="id"):
    if isinstance(x, list):
        return tuple(decode_id(y, where) for y in x)
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    raise FormatError(f"id must be a string, integer or list, got {x!r}", where)


def encode_scalar(x) -> dict:
    return Scalar.coerce(x).to_json()


def decode_scalar(x, where="scalar") -> Scalar:
    try:
        return Scalar.from_json(x)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc), where) from None


def _need(obj: dict, key: str, where: str, kind=None):
    if not isinstance(obj, dict):
        raise FormatError("expected an object", where)
    if key not in obj:
        raise FormatError(f"missing field {key!r}", where)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise FormatError(f"field {key!r} has the wrong type", f"{where}.{key}")
    return val


def _check_header(doc, fmt: str, where="$", optional=False):
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object", where)
    got = doc.get("format")
    if got is None and optional:
        return
    if got != fmt:
        raise FormatError(f"expected format {fmt!r}, found {got!r}", f"{where}.format")
    if doc.get("version", VERSION) != VERSION:
        raise FormatError(f"unsupported version {doc.get('version')!r}", f"{where}.version")


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(str(exc), str(path)) from None
    return loads(text)


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, ensure_ascii=True) + "\n"


def write_json(path, doc) -> None:
    Path(path).write_text(dumps(doc))


# ---------------------------------------------------------------------------
# signatures

def encode_signature(s: Signature) -> dict:
    if isinstance(s, Builtin):
        return {"kind": "builtin", "name": s.name, "arity": s.arity}
    if isinstance(s, CellSignature):
        return {"kind": "cell", "variant": s.kind, "n": s.n, "A": [list(p) for p in sorted(s.A)]}
    t = s.table()
    return {"kind": "table", "arity": t.arity,
            "entries": {bits_str(b): encode_scalar(v) for b, v in t.support()}}


def decode_signature(obj, where="signature") -> Signature:
    kind = _need(obj, "kind", where, str)
    if kind == "builtin":
        name = _need(obj, "name", where, str)
        arity = obj.get("arity", -1)
        try:
            return Builtin(name, arity)
        except ValueError as exc:
            raise FormatError(str(exc), where) from None
    if kind == "cell":
        try:
            return CellSignature(_need(obj, "n", where, int), obj.get("variant", "PROPAGATE"),
                                 frozenset(tuple(p) for p in obj.get("A", [])))
        except (ValueError, TypeError) as exc:
            raise FormatError(str(exc), where) from None
    if kind == "table":
        d = _need(obj, "arity", where, int)
        if not 0 <= d <= 24:
            raise FormatError("table arity must lie in 0..24", f"{where}.arity")
        vals = [Scalar(0)] * (1 << d)
        for key, v in _need(obj, "entries", where, dict).items():
            try:
                bits = parse_bits(key)
            except ValueError as exc:
                raise FormatError(str(exc), f"{where}.entries") from None
            if len(bits) != d:
                raise FormatError(f"entry {key!r} has {len(bits)} bits, arity is {d}", f"{where}.entries")
            idx = bits_to_index(bits)
            vals[idx] = decode_scalar(v, f"{where}.entries[{key!r}]")
        return DenseTable(tuple(vals))
    raise FormatError(f"unknown signature kind {kind!r}", f"{where}.kind")


# ---------------------------------------------------------------------------
# signature graphs and gates

def encode_graph(g: SignatureGraph, fmt: str = "graph") -> dict:
    doc = {"format": fmt, "version": VERSION, "vertices": [], "edges": []}
    for v in g.sig:
        doc["vertices"].append({"id": encode_id(v), "signature": encode_signature(g.sig[v]),
                                "incidence": [encode_id(e) for e in g.inc[v]]})
    for e, ed in g.edges.items():
        doc["edges"].append({"id": encode_id(e), "u": encode_id(ed.u),
                             "v": None if ed.v is None else encode_id(ed.v),
                             "weight": encode_scalar(ed.weight)})
    if g.rotation:
        doc["rotation"] = [{"vertex": encode_id(v), "order": [encode_id(e) for e in r]}
                           for v, r in g.rotation.items()]
    return doc


def decode_graph(doc, fmt: str = "graph") -> SignatureGraph:
    _check_header(doc, fmt)
    g = SignatureGraph()
    verts = _need(doc, "vertices", "$", list)
    for i, vo in enumerate(verts):
        w = f"$.vertices[{i}]"
        v = decode_id(_need(vo, "id", w), f"{w}.id")
        sig = decode_signature(_need(vo, "signature", w), f"{w}.signature")
        inc = [decode_id(e, f"{w}.incidence") for e in _need(vo, "incidence", w, list)]
        try:
            g.add_vertex(v, sig, inc)
        except ValueError as exc:
            raise FormatError(str(exc), w) from None
    for i, eo in enumerate(_need(doc, "edges", "$", list)):
        w = f"$.edges[{i}]"
        e = decode_id(_need(eo, "id", w), f"{w}.id")
        u = decode_id(_need(eo, "u", w), f"{w}.u")
        v = eo.get("v")
        v = None if v is None else decode_id(v, f"{w}.v")
        try:
            g.add_edge(e, u, v, decode_scalar(eo.get("weight", 1), f"{w}.weight"), attach=False)
        except ValueError as exc:
            raise FormatError(str(exc), w) from None
    for i, ro in enumerate(doc.get("rotation", [])):
        w = f"$.rotation[{i}]"
        g.rotation[decode_id(_need(ro, "vertex", w), w)] = [decode_id(e, w) for e in _need(ro, "order", w, list)]
    try:
        g.check()
    except ValueError as exc:
        raise FormatError(str(exc), "$") from None
    return g


def encode_gate(gate: Gate) -> dict:
    doc = encode_graph(gate.graph, "gate")
    doc["dangling"] = [encode_id(e) for e in gate.dangling]
    return doc


def decode_gate(doc) -> Gate:
    g = decode_graph(doc, "gate")
    dang = [decode_id(e, "$.dangling") for e in _need(doc, "dangling", "$", list)]
    try:
        return Gate(g, tuple(dang))
    except ValueError as exc:
        raise FormatError(str(exc), "$.dangling") from None


# ---------------------------------------------------------------------------
# weighted graphs (PerfMatch inputs)

def encode_embedded(g: EmbeddedGraph, apices=()) -> dict:
    doc = {"format": "weighted-graph", "version": VERSION,
           "vertices": [encode_id(v) for v in g.vertices],
           "edges": [{"u": encode_id(u), "v": encode_id(v), "weight": encode_scalar(w)}
                     for (u, v, w) in g.edges]}
    if g.rotation is not None:
        doc["rotation"] = [{"vertex": encode_id(v), "order": list(r)} for v, r in g.rotation.items()]
    if apices:
        doc["apices"] = [encode_id(a) for a in apices]
    return doc


def decode_embedded(doc) -> tuple[EmbeddedGraph, list]:
    """Weighted graph; a "graph" document of HW=1 vertices is accepted too."""
    if isinstance(doc, dict) and doc.get("format") == "graph":
        from .matching import from_signature_graph
        try:
            return from_signature_graph(decode_graph(doc)), []
        except ValueError as exc:
            raise FormatError(str(exc), "$") from None
    _check_header(doc, "weighted-graph")
    verts = [decode_id(v, "$.vertices") for v in _need(doc, "vertices", "$", list)]
    edges = []
    for i, eo in enumerate(_need(doc, "edges", "$", list)):
        w = f"$.edges[{i}]"
        edges.append((decode_id(_need(eo, "u", w), w), decode_id(_need(eo, "v", w), w),
                      decode_scalar(eo.get("weight", 1), f"{w}.weight")))
    rot = None
    if "rotation" in doc:
        rot = {}
        for i, ro in enumerate(doc["rotation"]):
            w = f"$.rotation[{i}]"
            order = _need(ro, "order", w, list)
            if not all(isinstance(x, int) and 0 <= x < len(edges) for x in order):
                raise FormatError("rotation entries must be edge indices", f"{w}.order")
            rot[decode_id(_need(ro, "vertex", w), w)] = list(order)
    apices = [decode_id(a, "$.apices") for a in doc.get("apices", [])]
    try:
        return EmbeddedGraph(verts, edges, rot), apices
    except ValueError as exc:
        raise FormatError(str(exc), "$") from None


def decode_matrix(doc) -> list:
    _check_header(doc, "matrix")
    rows = _need(doc, "rows", "$", list)
    out = []
    for i, r in enumerate(rows):
        if not isinstance(r, list) or len(r) != len(rows):
            raise FormatError("matrix must be square", f"$.rows[{i}]")
        out.append([decode_scalar(x, f"$.rows[{i}][{j}]") for j, x in enumerate(r)])
    return out


def encode_matrix(rows) -> dict:
    return {"format": "matrix", "version": VERSION, "rows": [[encode_scalar(x) for x in r] for r in rows]}


# ---------------------------------------------------------------------------
# grid tiling, coloured graphs, simple graphs

def encode_instance(t: GridTilingInstance) -> dict:
    return {"format": "gridtiling", "version": VERSION, "n": t.n, "k": t.k,
            "C": [list(c) for c in sorted(t.C)],
            "T": {f"{i},{j}": [list(p) for p in sorted(t.T[(i, j)])] for (i, j) in sorted(t.C)}}


def _pair(x, where):
    if not (isinstance(x, list) and len(x) == 2 and all(isinstance(y, int) and not isinstance(y, bool) for y in x)):
        raise FormatError("expected a pair of integers", where)
    return tuple(x)


def decode_instance(doc) -> GridTilingInstance:
    _check_header(doc, "gridtiling", optional=True)
    n = _need(doc, "n", "$", int)
    k = _need(doc, "k", "$", int)
    C = [_pair(c, f"$.C[{i}]") for i, c in enumerate(_need(doc, "C", "$", list))]
    T = {}
    for key, pairs in _need(doc, "T", "$", dict).items():
        parts = key.split(",")
        try:
            cell = (int(parts[0]), int(parts[1]))
            if len(parts) != 2:
                raise ValueError
        except (ValueError, IndexError):
            raise FormatError(f"cell key {key!r} must read 'i,j'", "$.T") from None
        T[cell] = [_pair(p, f"$.T[{key!r}][{i}]") for i, p in enumerate(pairs)]
    try:
        return GridTilingInstance(n, k, frozenset(C), T)
    except ValueError as exc:
        raise FormatError(str(exc), "$") from None


def encode_colored(g: ColoredGraph) -> dict:
    return {"format": "colored-graph", "version": VERSION,
            "vertices": [{"id": encode_id(v), "color": g.color[v]} for v in g.vertices],
            "edges": [[encode_id(u), encode_id(v)] for (u, v) in g.edges]}


def decode_colored(doc, where="$") -> ColoredGraph:
    _check_header(doc, "colored-graph", where, optional=True)
    verts, color = [], {}
    for i, vo in enumerate(_need(doc, "vertices", where, list)):
        w = f"{where}.vertices[{i}]"
        v = decode_id(_need(vo, "id", w), w)
        verts.append(v)
        color[v] = _need(vo, "color", w, int)
    edges = []
    for i, e in enumerate(_need(doc, "edges", where, list)):
        if not (isinstance(e, list) and len(e) == 2):
            raise FormatError("edge must be a pair", f"{where}.edges[{i}]")
        u, v = decode_id(e[0], where), decode_id(e[1], where)
        if u not in color or v not in color:
            raise FormatError("edge has an unknown endpoint", f"{where}.edges[{i}]")
        edges.append((u, v))
    return ColoredGraph(verts, color, edges)


def encode_psub(p: PartitionedSubInstance) -> dict:
    return {"format": "psub", "version": VERSION, "H": encode_colored(p.H), "G": encode_colored(p.G)}


def decode_psub(doc) -> PartitionedSubInstance:
    _check_header(doc, "psub")
    try:
        return PartitionedSubInstance(decode_colored(_need(doc, "H", "$"), "$.H"),
                                      decode_colored(_need(doc, "G", "$"), "$.G"))
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc), "$") from None


def decode_simple_graph(doc) -> tuple[list, list]:
    _check_header(doc, "simple-graph")
    verts = [decode_id(v, "$.vertices") for v in _need(doc, "vertices", "$", list)]
    vs = set(verts)
    edges = []
    for i, e in enumerate(_need(doc, "edges", "$", list)):
        if not (isinstance(e, list) and len(e) == 2):
            raise FormatError("edge must be a pair", f"$.edges[{i}]")
        u, v = decode_id(e[0]), decode_id(e[1])
        if u not in vs or v not in vs:
            raise FormatError("edge has an unknown endpoint", f"$.edges[{i}]")
        edges.append((u, v))
    return verts, edges


def encode_simple_graph(vertices, edges) -> dict:
    return {"format": "simple-graph", "version": VERSION, "vertices": [encode_id(v) for v in vertices],
            "edges": [[encode_id(u), encode_id(v)] for u, v in edges]}


# ---------------------------------------------------------------------------
# plane models

def _side_label(name, inverse):
    return f"{name}^-1" if inverse else name


def encode_plane_model(m) -> dict:
    partner = {}
    seen = set()
    for name, inv in m.sides:
        if name in seen:
            partner[name] = _side_label(name, inv)
        seen.add(name)

    def ref(x):
        if isinstance(x, tuple) and len(x) == 2 and x[1] in ("exit", "entry") and x[0] in m.bunch_of():
            return {"stub": encode_id(x[0]), "end": x[1]}
        return encode_id(x)

    return {"format": "plane-model", "version": VERSION, "pattern": m.pattern, "name": m.name,
            "sides": [_side_label(n, i) for n, i in m.sides],
            "interior": {
                "vertices": [encode_id(v) for v in m.vertices],
                "edges": [{"id": encode_id(e), "u": encode_id(u), "v": encode_id(v), "weight": encode_scalar(w)}
                          for (e, u, v, w) in m.edges],
                "rotation": [{"vertex": encode_id(v), "order": [ref(x) for x in m.rotation[v]]}
                             for v in m.vertices]},
            "bunches": [{"side": name, "partner": partner.get(name, ""),
                         "edges": [{"id": encode_id(e), "exit": encode_id(u), "entry": encode_id(v),
                                    "weight": encode_scalar(w)} for (e, u, v, w) in lst]}
                        for name, lst in m.bunches.items()]}


def decode_plane_model(doc):
    from .genus import PlaneModel, PlaneModelError
    _check_header(doc, "plane-model")
    sides = []
    for i, s in enumerate(_need(doc, "sides", "$", list)):
        if not isinstance(s, str) or not s:
            raise FormatError("side label must be a non-empty string", f"$.sides[{i}]")
        sides.append((s[:-3], True) if s.endswith("^-1") else (s, False))
    inner = _need(doc, "interior", "$", dict)
    verts = [decode_id(v, "$.interior.vertices") for v in _need(inner, "vertices", "$.interior", list)]
    edges = []
    for i, eo in enumerate(_need(inner, "edges", "$.interior", list)):
        w = f"$.interior.edges[{i}]"
        edges.append((decode_id(_need(eo, "id", w), w), decode_id(_need(eo, "u", w), w),
                      decode_id(_need(eo, "v", w), w), decode_scalar(eo.get("weight", 1), f"{w}.weight")))
    bunches = {}
    for i, bo in enumerate(_need(doc, "bunches", "$", list)):
        w = f"$.bunches[{i}]"
        name = _need(bo, "side", w, str)
        lst = []
        for j, eo in enumerate(_need(bo, "edges", w, list)):
            ww = f"{w}.edges[{j}]"
            lst.append((decode_id(_need(eo, "id", ww), ww), decode_id(_need(eo, "exit", ww), ww),
                        decode_id(_need(eo, "entry", ww), ww), decode_scalar(eo.get("weight", 1), f"{ww}.weight")))
        bunches[name] = lst
        want = [_side_label(n, inv) for n, inv in sides if n == name][1:]
        if bo.get("partner") not in (None, "") and [bo["partner"]] != want:
            raise FormatError(f"partner {bo['partner']!r} disagrees with the side list", f"{w}.partner")
    rotation = {}
    for i, ro in enumerate(_need(inner, "rotation", "$.interior", list)):
        w = f"$.interior.rotation[{i}]"
        order = []
        for x in _need(ro, "order", w, list):
            if isinstance(x, dict):
                end = _need(x, "end", w, str)
                if end not in ("exit", "entry"):
                    raise FormatError(f"stub end must be exit or entry, got {end!r}", w)
                order.append((decode_id(_need(x, "stub", w), w), end))
            else:
                order.append(decode_id(x, w))
        rotation[decode_id(_need(ro, "vertex", w), w)] = order
    m = PlaneModel(verts, edges, bunches, sides, _need(doc, "pattern", "$", str), rotation, doc.get("name", ""))
    try:
        m.check()
    except (PlaneModelError, ValueError, KeyError) as exc:
        raise FormatError(str(exc), "$") from None
    return m
