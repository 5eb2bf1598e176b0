"""Regenerate the bundled fixtures in src/holantlab/data (deterministic)."""

import random
import sys
from pathlib import Path

from holantlab import formats as F
from holantlab.generators import random_apex_graph
from holantlab.genus import PlaneModel, ORIENTABLE, k33_model, search_rotation, toroidal_grid_model
from holantlab.gridtiling import ColoredGraph, GridTilingInstance, PartitionedSubInstance
from holantlab.matchgates import build_pass_matchgate
from holantlab.matching import EmbeddedGraph

DATA = Path(__file__).resolve().parent.parent / "src" / "holantlab" / "data"

INSTANCES = {
    # both balanced vertically and horizontally (T = 1)
    "fixture_odd": GridTilingInstance(3, 1, {(1, 1)}, {(1, 1): [(1, 2), (2, 3), (3, 1)]}),
    "fixture_even": GridTilingInstance(2, 1, {(1, 1)}, {(1, 1): [(1, 1), (2, 2)]}),
    "fixture_n2k2_c1": GridTilingInstance(2, 2, {(1, 2)}, {(1, 2): [(1, 2), (2, 1)]}),
    "fixture_n2k2_c2": GridTilingInstance(2, 2, {(1, 1), (2, 2)},
                                          {(1, 1): [(1, 1), (2, 2)], (2, 2): [(1, 2), (2, 1)]}),
}


def k4_model() -> PlaneModel:
    edges = [(f"e{i}{j}", i, j, 1) for i in range(4) for j in range(i + 1, 4)]
    return search_rotation(PlaneModel([0, 1, 2, 3], edges, {}, [], ORIENTABLE, {}, "K4-plane"))


def main(out=DATA):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    # K4 with a planar rotation (neighbours clockwise)
    nbr = {0: [1, 2, 3], 1: [0, 3, 2], 2: [0, 1, 3], 3: [0, 2, 1]}
    edges, index = [], {}
    for u in nbr:
        for v in nbr[u]:
            if (v, u) not in index:
                index[(u, v)] = len(edges)
                edges.append((u, v, 1))
    rot = {u: [index.get((u, v), index.get((v, u))) for v in nbr[u]] for u in nbr}
    F.write_json(out / "k4.graph", F.encode_embedded(EmbeddedGraph(list(nbr), edges, rot)))
    k33 = EmbeddedGraph([f"a{i}" for i in range(3)] + [f"b{i}" for i in range(3)],
                        [(f"a{i}", f"b{j}", 1) for i in range(3) for j in range(3)])
    F.write_json(out / "k33.graph", F.encode_embedded(k33))
    g, apices = random_apex_graph(10, 2, random.Random(7))
    F.write_json(out / "apex2.graph", F.encode_embedded(g, apices))
    F.write_json(out / "matrix4.json", F.encode_matrix([[1, 2, 0, 1], [0, 1, 1, 1], [3, 0, 1, 2], [1, 1, 1, 0]]))
    for name, t in INSTANCES.items():
        F.write_json(out / f"{name}.gt", F.encode_instance(t))
    for name, m in (("k33_torus", k33_model("torus")), ("k33_projective", k33_model("projective")),
                    ("torus3x4", toroidal_grid_model(3, 4)), ("k4_plane", k4_model())):
        F.write_json(out / f"{name}.model", F.encode_plane_model(m))
    F.write_json(out / "k5.json", F.encode_simple_graph(list(range(5)), [(i, j) for i in range(5) for j in range(i + 1, 5)]))
    H = ColoredGraph(["h1", "h2", "h3"], {"h1": 1, "h2": 2, "h3": 3}, [("h1", "h2"), ("h2", "h3")])
    G = ColoredGraph(["x1", "y1", "x2", "y2", "x3"], {"x1": 1, "y1": 1, "x2": 2, "y2": 2, "x3": 3},
                     [("x1", "x2"), ("y1", "x2"), ("x2", "x3"), ("y2", "x3"), ("x1", "y2")])
    F.write_json(out / "psub_path.json", F.encode_psub(PartitionedSubInstance(H, G)))
    mg = build_pass_matchgate()
    doc = F.encode_gate(mg.gate)
    doc["target"] = F.encode_signature(mg.target)
    F.write_json(out / "gamma_pass.gate", doc)
    return sorted(p.name for p in out.iterdir())


if __name__ == "__main__":
    for name in main(*sys.argv[1:]):
        print(name)
