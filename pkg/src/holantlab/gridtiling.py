"""Grid tiling instances, counting oracles, balancing and reductions.

A grid tiling of (n, k, C, T) picks a row value r_i for every grid row and a
column value c_j for every grid column; cell (i, j) then holds
a(i, j) = (r_i, c_j), and for every cell in C that pair must lie in T(i, j).
All indices are 1-based.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .graph import BudgetExceeded

HORIZONTAL = "HORIZONTAL"
VERTICAL = "VERTICAL"
DEFAULT_SEARCH_BUDGET = 10 ** 7


@dataclass(frozen=True)
class GridTilingInstance:
    n: int
    k: int
    C: frozenset
    T: dict = field(hash=False, compare=False)

    def __post_init__(self):
        C = frozenset(tuple(c) for c in self.C)
        T = {tuple(c): frozenset(tuple(p) for p in self.T.get(tuple(c), ())) for c in C}
        extra = set(tuple(c) for c in self.T) - C
        if extra:
            raise ValueError(f"T given for cells outside C: {sorted(extra)}")
        for (i, j) in C:
            if not (1 <= i <= self.k and 1 <= j <= self.k):
                raise ValueError(f"cell {(i, j)} outside [k]^2")
        for kappa, pairs in T.items():
            for (u, v) in pairs:
                if not (1 <= u <= self.n and 1 <= v <= self.n):
                    raise ValueError(f"T{kappa} contains {(u, v)} outside [n]^2")
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "T", T)

    def key(self):
        return (self.n, self.k, tuple(sorted(self.C)), tuple(sorted((c, tuple(sorted(p))) for c, p in self.T.items())))

    def __eq__(self, other):
        return isinstance(other, GridTilingInstance) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def column_count(self, kappa, v: int) -> int:
        return sum(1 for (_, b) in self.T[kappa] if b == v)

    def row_count(self, kappa, u: int) -> int:
        return sum(1 for (a, _) in self.T[kappa] if a == u)

    def vertical_balance(self) -> int | None:
        """T with |T(kappa) cap (*, v)| = T for all kappa in C, v in [n]; else None."""
        vals = {self.column_count(c, v) for c in self.C for v in range(1, self.n + 1)}
        return vals.pop() if len(vals) == 1 else (None if vals else 0)

    def horizontal_balance(self) -> int | None:
        vals = {self.row_count(c, u) for c in self.C for u in range(1, self.n + 1)}
        return vals.pop() if len(vals) == 1 else (None if vals else 0)


def iter_tilings(t: GridTilingInstance, budget: int = DEFAULT_SEARCH_BUDGET):
    """Yield (rows, cols) tuples of every grid tiling."""
    n, k = t.n, t.k
    if n ** (2 * k) > budget:
        raise BudgetExceeded(f"n^(2k) = {n ** (2 * k)} exceeds the search budget {budget}")
    cells_by_row = {i: [(j, t.T[(i, j)]) for j in range(1, k + 1) if (i, j) in t.C] for i in range(1, k + 1)}
    values = range(1, n + 1)
    for cols in itertools.product(values, repeat=k):
        per_row = []
        for i in range(1, k + 1):
            ok = [r for r in values if all((r, cols[j - 1]) in pairs for j, pairs in cells_by_row[i])]
            if not ok:
                break
            per_row.append(ok)
        else:
            for rows in itertools.product(*per_row):
                yield rows, cols


def count_tilings(t: GridTilingInstance, budget: int = DEFAULT_SEARCH_BUDGET) -> int:
    n, k = t.n, t.k
    if n ** k > budget:
        raise BudgetExceeded(f"n^k = {n ** k} exceeds the search budget {budget}")
    cells_by_row = {i: [(j, t.T[(i, j)]) for j in range(1, k + 1) if (i, j) in t.C] for i in range(1, k + 1)}
    total = 0
    for cols in itertools.product(range(1, n + 1), repeat=k):
        prod = 1
        for i in range(1, k + 1):
            prod *= sum(1 for r in range(1, n + 1)
                        if all((r, cols[j - 1]) in pairs for j, pairs in cells_by_row[i]))
            if not prod:
                break
        total += prod
    return total


def count_tilings_naive(t: GridTilingInstance, budget: int = DEFAULT_SEARCH_BUDGET) -> int:
    """Literal definition: every a : [k]^2 -> [n]^2 checked against all conditions."""
    n, k = t.n, t.k
    cells = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1)]
    if (n * n) ** len(cells) > budget:
        raise BudgetExceeded("naive tiling enumeration exceeds the budget")
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1)]
    count = 0
    for choice in itertools.product(pairs, repeat=len(cells)):
        a = dict(zip(cells, choice))
        ok = all(a[c] in t.T[c] for c in t.C)
        ok = ok and all(a[(i, j)][0] == a[(i, j + 1)][0] for i in range(1, k + 1) for j in range(1, k))
        ok = ok and all(a[(i, j)][1] == a[(i + 1, j)][1] for i in range(1, k) for j in range(1, k + 1))
        count += ok
    return count


def parity_tilings(t: GridTilingInstance, budget: int = DEFAULT_SEARCH_BUDGET) -> int:
    return count_tilings(t, budget) % 2


def balance(t: GridTilingInstance, direction: str = VERTICAL) -> tuple[GridTilingInstance, int]:
    """Pad every T(kappa) with dummy elements so each column (or row) has T entries.

    T is the largest column (row) count.  Cell kappa owns its own block of T
    dummy indices beyond n, and n grows to n + k^2 T.  Dummy partners are
    taken lexicographically smallest first.  The padding follows the
    construction literally: only columns (rows) v in [n] are padded.  See
    ``balance_preserves_tilings`` for when the tiling set is unchanged.
    """
    if direction not in (VERTICAL, HORIZONTAL):
        raise ValueError(f"unknown direction {direction!r}")
    n, k = t.n, t.k
    counter = t.column_count if direction == VERTICAL else t.row_count
    T = max((counter(c, v) for c in t.C for v in range(1, n + 1)), default=0)
    n2 = n + k * k * T
    cells = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1)]
    block = {c: list(range(n + idx * T + 1, n + (idx + 1) * T + 1)) for idx, c in enumerate(cells)}
    newT = {}
    for c in t.C:
        pairs = set(t.T[c])
        for v in range(1, n + 1):
            need = T - counter(c, v)
            dummies = block[c][:need]
            for d in dummies:
                pairs.add((d, v) if direction == VERTICAL else (v, d))
        newT[c] = pairs
    return GridTilingInstance(n2, k, t.C, newT), T


def balance_preserves_tilings(t: GridTilingInstance, direction: str = VERTICAL) -> bool:
    """Sufficient condition for ``balance`` to keep the tiling set.

    Every grid row and grid column must contain a cell of C (otherwise the
    larger index range admits new values there), and a grid row (column for
    HORIZONTAL) holding exactly one cell of C must need no padding, since
    only a second cell in the same line rules out the dummy values.
    """
    k, n = t.k, t.n
    rows = {i for (i, _) in t.C}
    cols = {j for (_, j) in t.C}
    if rows != set(range(1, k + 1)) or cols != set(range(1, k + 1)):
        return False
    counter = t.column_count if direction == VERTICAL else t.row_count
    T = max((counter(c, v) for c in t.C for v in range(1, n + 1)), default=0)
    for c in t.C:
        line = [d for d in t.C if (d[0] == c[0] if direction == VERTICAL else d[1] == c[1])]
        if len(line) == 1 and any(counter(c, v) != T for v in range(1, n + 1)):
            return False
    return True


# ---------------------------------------------------------------------------
# PartitionedSub and Clique

@dataclass
class ColoredGraph:
    vertices: list
    color: dict
    edges: list  # list of (u, v)

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass
class PartitionedSubInstance:
    H: ColoredGraph
    G: ColoredGraph

    def __post_init__(self):
        colours = sorted(self.H.color[v] for v in self.H.vertices)
        if colours != list(range(1, len(colours) + 1)):
            raise ValueError("H must be colourful with colours 1..k")

    @property
    def k(self) -> int:
        return len(self.H.vertices)


def preprocess_psub(p: PartitionedSubInstance) -> PartitionedSubInstance:
    """Delete G-edges between colour classes that are not adjacent in H, and
    edges inside a colour class."""
    hcol = {p.H.color[v]: v for v in p.H.vertices}
    hedges = {frozenset((p.H.color[u], p.H.color[v])) for u, v in p.H.edges}
    keep = [(u, v) for u, v in p.G.edges
            if p.G.color[u] != p.G.color[v] and frozenset((p.G.color[u], p.G.color[v])) in hedges]
    return PartitionedSubInstance(p.H, ColoredGraph(list(p.G.vertices), dict(p.G.color), keep))


def count_psub(p: PartitionedSubInstance, budget: int = DEFAULT_SEARCH_BUDGET) -> int:
    """Colour-preserving copies of H: one G-vertex per colour with H's edges present."""
    k = p.k
    classes = {c: [v for v in p.G.vertices if p.G.color[v] == c] for c in range(1, k + 1)}
    if math.prod(len(x) or 1 for x in classes.values()) > budget:
        raise BudgetExceeded("PartitionedSub enumeration exceeds the budget")
    adj = p.G.adjacency()
    hpairs = [(p.H.color[u], p.H.color[v]) for u, v in p.H.edges]
    count = 0
    for pick in itertools.product(*(classes[c] for c in range(1, k + 1))):
        if all(pick[b - 1] in adj[pick[a - 1]] for a, b in hpairs):
            count += 1
    return count


def psub_to_gridtiling(p: PartitionedSubInstance) -> GridTilingInstance:
    """Directed edges plus self-loops; C = E(H'), T(i, j) = edges from class i to class j."""
    p = preprocess_psub(p)
    k = p.k
    classes = {c: [v for v in p.G.vertices if p.G.color[v] == c] for c in range(1, k + 1)}
    index = {}
    for c, vs in classes.items():
        for pos, v in enumerate(vs, start=1):
            index[v] = pos
    n = max((len(vs) for vs in classes.values()), default=1) or 1
    C = {(c, c) for c in range(1, k + 1)}
    for u, v in p.H.edges:
        a, b = p.H.color[u], p.H.color[v]
        C.add((a, b))
        C.add((b, a))
    T = {c: set() for c in C}
    for c in range(1, k + 1):
        for v in classes[c]:
            T[(c, c)].add((index[v], index[v]))
    for u, v in p.G.edges:
        a, b = p.G.color[u], p.G.color[v]
        if (a, b) in C:
            T[(a, b)].add((index[u], index[v]))
            T[(b, a)].add((index[v], index[u]))
    return GridTilingInstance(n, k, C, T)


def clique_to_psub(g: tuple, k: int) -> tuple[PartitionedSubInstance, int]:
    """Colour-coded blow-up; colour-preserving copies equal k! times the k-cliques."""
    vertices, edges = g
    H = ColoredGraph(list(range(1, k + 1)), {i: i for i in range(1, k + 1)},
                     [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)])
    gv = [(v, i) for i in range(1, k + 1) for v in vertices]
    col = {(v, i): i for (v, i) in gv}
    eset = {frozenset(e) for e in edges if e[0] != e[1]}
    ge = []
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            for e in eset:
                u, v = tuple(e)
                ge.append(((u, i), (v, j)))
                ge.append(((v, i), (u, j)))
    return PartitionedSubInstance(H, ColoredGraph(gv, col, ge)), math.factorial(k)


def count_cliques(g: tuple, k: int) -> int:
    vertices, edges = g
    eset = {frozenset(e) for e in edges}
    return sum(1 for S in itertools.combinations(vertices, k)
               if all(frozenset((a, b)) in eset for a, b in itertools.combinations(S, 2)))


# ---------------------------------------------------------------------------
# random instances

def random_instance(rng: random.Random, n: int, k: int, cells: int | None = None,
                    density: float = 0.5) -> GridTilingInstance:
    all_cells = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1)]
    m = rng.randint(0, len(all_cells)) if cells is None else cells
    C = rng.sample(all_cells, m)
    T = {c: {(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if rng.random() < density} for c in C}
    return GridTilingInstance(n, k, C, T)


def random_balanced_set(rng: random.Random, n: int, T: int, direction: str) -> set:
    """A subset of [n]^2 with exactly T entries in every column (VERTICAL) or row."""
    out = set()
    for line in range(1, n + 1):
        for other in rng.sample(range(1, n + 1), T):
            out.add((other, line) if direction == VERTICAL else (line, other))
    return out


def random_balanced_instance(rng: random.Random, n: int, k: int, cells: int, T: int,
                             direction: str) -> GridTilingInstance:
    all_cells = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1)]
    C = rng.sample(all_cells, cells)
    return GridTilingInstance(n, k, C, {c: random_balanced_set(rng, n, T, direction) for c in C})


def random_psub(rng: random.Random, k: int, max_class: int, edge_prob: float = 0.5,
                h_edge_prob: float = 0.6) -> PartitionedSubInstance:
    H = ColoredGraph(list(range(1, k + 1)), {i: i for i in range(1, k + 1)},
                     [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1) if rng.random() < h_edge_prob])
    verts, col = [], {}
    for c in range(1, k + 1):
        for x in range(rng.randint(1, max_class)):
            verts.append((c, x))
            col[(c, x)] = c
    edges = [(u, v) for u, v in itertools.combinations(verts, 2) if col[u] != col[v] and rng.random() < edge_prob]
    return PartitionedSubInstance(H, ColoredGraph(verts, col, edges))
