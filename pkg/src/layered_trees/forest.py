"""Layered rooted forests: raw input, validation, subdivision, layer orders, crossings.

Layers are numbered from 1 (the leaves) upwards.  Tree indices are 0-based.
Every edge is stored as ``(child, parent)``, i.e. pointing towards the root.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .errors import (
    CycleDetected,
    ForestError,
    InvalidDrawing,
    LeafNotOnLayerOne,
    LongEdge,
    MissingLeafInOrder,
    NonContiguousLeaves,
)

Edge = tuple[str, str]
Constraint = tuple[str, str]


@dataclass(frozen=True)
class RawTree:
    root: str
    edges: tuple[Edge, ...]
    layer: Mapping[str, int]
    dummies: frozenset[str] = frozenset()


@dataclass(frozen=True)
class RawForest:
    """Unvalidated forest exactly as supplied by a user or a file."""

    num_layers: int
    trees: tuple[RawTree, ...]
    leaf_order: tuple[str, ...]


@dataclass(frozen=True)
class Vertex:
    id: str
    layer: int
    parent: str | None
    children: tuple[str, ...]
    # first/last index in the global leaf order among descendant leaves
    leaf_span: tuple[int, int]
    dummy: bool = False


@dataclass(frozen=True)
class Tree:
    root: str
    vertices: Mapping[str, Vertex]

    def __len__(self) -> int:
        return len(self.vertices)

    def on_layer(self, j: int) -> list[Vertex]:
        return [v for v in self.vertices.values() if v.layer == j]

    def edges(self) -> list[Edge]:
        return [(v.id, v.parent) for v in self.vertices.values() if v.parent is not None]


@dataclass(frozen=True)
class LayeredForest:
    num_layers: int
    trees: tuple[Tree, ...]
    leaf_order: tuple[str, ...]

    @property
    def k(self) -> int:
        return len(self.trees)

    @cached_property
    def n(self) -> int:
        return sum(len(t) for t in self.trees)

    @cached_property
    def tree_of(self) -> dict[str, int]:
        return {v: i for i, t in enumerate(self.trees) for v in t.vertices}

    def vertex(self, v: str) -> Vertex:
        return self.trees[self.tree_of[v]].vertices[v]

    def layer(self, v: str) -> int:
        return self.vertex(v).layer

    def edges(self) -> list[Edge]:
        return [e for t in self.trees for e in t.edges()]

    def strip_edges(self, j: int) -> list[Edge]:
        """Edges between layer ``j`` and layer ``j + 1``."""
        return [e for e in self.edges() if self.layer(e[0]) == j]

    def layer_vertices(self, j: int) -> list[str]:
        return [v.id for t in self.trees for v in t.vertices.values() if v.layer == j]


@dataclass(frozen=True)
class LayerOrders:
    """Per-tree total orders of every layer; their union is the partial order of a layer."""

    num_layers: int
    by_tree: tuple[dict[int, tuple[str, ...]], ...]

    def tree_order(self, tree: int, j: int) -> tuple[str, ...]:
        return self.by_tree[tree].get(j, ())

    def chains(self, j: int) -> list[tuple[str, ...]]:
        return [self.tree_order(i, j) for i in range(len(self.by_tree))]

    def size(self, tree: int, j: int) -> int:
        return len(self.tree_order(tree, j))

    def precedes(self, x: str, y: str) -> bool:
        """True iff ``x`` must come before ``y`` (same tree, same layer)."""
        for orders in self.by_tree:
            for seq in orders.values():
                if x in seq and y in seq:
                    return seq.index(x) < seq.index(y)
        return False


@dataclass(frozen=True)
class Drawing:
    """One total order per layer; ``layers[0]`` is layer 1."""

    layers: tuple[tuple[str, ...], ...]

    def order(self, j: int) -> tuple[str, ...]:
        return self.layers[j - 1] if 1 <= j <= len(self.layers) else ()

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: x for seq in self.layers for x, v in enumerate(seq)}

    def coordinates(self) -> dict[str, tuple[int, int]]:
        return {v: (x, j) for j, seq in enumerate(self.layers, start=1) for x, v in enumerate(seq)}


# ---------------------------------------------------------------------------
# subdivision


def subdivide_long_edges(raw: RawForest) -> RawForest:
    """Replace every edge spanning ``d > 1`` layers by a path through ``d - 1`` dummies.

    Dummy ids are ``"<child>~<parent>#<layer>"``, suffixed with ``'`` until unique.
    Idempotent on forests without long edges.
    """
    taken = {v for t in raw.trees for v in t.layer}
    taken.update(v for t in raw.trees for e in t.edges for v in e)
    trees = []
    for t in raw.trees:
        if all(_span(t, c, p) <= 1 for c, p in t.edges):
            trees.append(t)
            continue
        edges: list[Edge] = []
        layer = dict(t.layer)
        dummies = set(t.dummies)
        for c, p in t.edges:
            if _span(t, c, p) <= 1:
                edges.append((c, p))
                continue
            prev = c
            for j in range(t.layer[c] + 1, t.layer[p]):
                d = f"{c}~{p}#{j}"
                while d in taken:
                    d += "'"
                taken.add(d)
                layer[d] = j
                dummies.add(d)
                edges.append((prev, d))
                prev = d
            edges.append((prev, p))
        trees.append(RawTree(t.root, tuple(edges), layer, frozenset(dummies)))
    return RawForest(raw.num_layers, tuple(trees), raw.leaf_order)


def _span(t: RawTree, c: str, p: str) -> int:
    if c not in t.layer or p not in t.layer:
        return 1  # reported by validation
    return t.layer[p] - t.layer[c]


# ---------------------------------------------------------------------------
# validation


def validate_forest(raw: RawForest) -> LayeredForest:
    """Check every structural requirement and build the immutable forest.

    Raises a :class:`ForestError` subclass naming the first violation found.
    """
    if raw.num_layers < 2:
        raise ForestError(f"need at least 2 layers, got {raw.num_layers}")
    if not raw.trees:
        raise ForestError("forest has no trees")

    seen: dict[str, int] = {}
    parents_per_tree: list[dict[str, str]] = []
    for i, t in enumerate(raw.trees):
        verts = set(t.layer) | {t.root} | {v for e in t.edges for v in e}
        for v in sorted(verts):
            if v in seen:
                raise ForestError(f"vertex {v!r} appears in trees {seen[v]} and {i}")
            seen[v] = i
        for v in sorted(verts):
            if v not in t.layer:
                raise ForestError(f"tree {i}: vertex {v!r} has no layer")
        parent: dict[str, str] = {}
        for c, p in t.edges:
            if c in parent:
                raise ForestError(f"tree {i}: vertex {c!r} has two parents")
            parent[c] = p
        if t.root in parent:
            raise ForestError(f"tree {i}: root {t.root!r} has a parent")
        _check_acyclic_connected(i, t.root, verts, parent)
        parents_per_tree.append(parent)

    for i, t in enumerate(raw.trees):
        for v, j in t.layer.items():
            if not 1 <= j <= raw.num_layers:
                raise ForestError(f"vertex {v!r} on layer {j}, outside 1..{raw.num_layers}")
        for c, p in t.edges:
            d = t.layer[p] - t.layer[c]
            if d >= 2:
                raise LongEdge(c, p)
            if d <= 0:
                raise ForestError(f"edge ({c!r}, {p!r}) does not point upwards")

    children: list[dict[str, list[str]]] = []
    for i, t in enumerate(raw.trees):
        ch: dict[str, list[str]] = {v: [] for v in t.layer}
        for c, p in t.edges:
            ch[p].append(c)
        for v, cs in ch.items():
            if not cs and t.layer[v] != 1:
                raise LeafNotOnLayerOne(v, t.layer[v])
        children.append(ch)

    leaves = {v for i, t in enumerate(raw.trees) for v in t.layer if t.layer[v] == 1}
    pos: dict[str, int] = {}
    for x, v in enumerate(raw.leaf_order):
        if v in pos:
            raise ForestError(f"leaf {v!r} listed twice in the leaf order")
        if v not in leaves:
            raise ForestError(f"{v!r} in the leaf order is not a layer-1 vertex")
        pos[v] = x
    for v in sorted(leaves):
        if v not in pos:
            raise MissingLeafInOrder(v)

    trees = []
    for i, t in enumerate(raw.trees):
        trees.append(_build_tree(i, t, parents_per_tree[i], children[i], pos))
    return LayeredForest(raw.num_layers, tuple(trees), tuple(raw.leaf_order))


def _check_acyclic_connected(i: int, root: str, verts: set[str], parent: Mapping[str, str]) -> None:
    done = {root}
    for start in sorted(verts):
        path: list[str] = []
        on_path: set[str] = set()
        v = start
        while v not in done:
            if v in on_path:
                raise CycleDetected(v)
            if v not in parent:
                raise ForestError(f"tree {i}: vertex {v!r} is not connected to root {root!r}")
            on_path.add(v)
            path.append(v)
            v = parent[v]
        done.update(path)


def _build_tree(
    i: int,
    t: RawTree,
    parent: Mapping[str, str],
    children: Mapping[str, list[str]],
    pos: Mapping[str, int],
) -> Tree:
    # rank of each leaf among this tree's leaves, for the contiguity test
    own_leaves = sorted((v for v in t.layer if t.layer[v] == 1), key=pos.__getitem__)
    rank = {v: r for r, v in enumerate(own_leaves)}

    span: dict[str, tuple[int, int]] = {}
    rank_span: dict[str, tuple[int, int, int]] = {}  # lo, hi, count
    for v in sorted(t.layer, key=t.layer.__getitem__):
        if t.layer[v] == 1:
            span[v] = (pos[v], pos[v])
            rank_span[v] = (rank[v], rank[v], 1)
            continue
        cs = children[v]
        span[v] = (min(span[c][0] for c in cs), max(span[c][1] for c in cs))
        lo = min(rank_span[c][0] for c in cs)
        hi = max(rank_span[c][1] for c in cs)
        cnt = sum(rank_span[c][2] for c in cs)
        if hi - lo + 1 != cnt:
            raise NonContiguousLeaves(i, v)
        rank_span[v] = (lo, hi, cnt)

    vertices = {
        v: Vertex(
            id=v,
            layer=t.layer[v],
            parent=parent.get(v),
            children=tuple(sorted(children[v], key=lambda c: span[c][0])),
            leaf_span=span[v],
            dummy=v in t.dummies,
        )
        for v in sorted(t.layer, key=lambda u: (t.layer[u], span[u][0]))
    }
    return Tree(t.root, vertices)


def build_forest(raw: RawForest) -> LayeredForest:
    """Subdivide long edges, then validate."""
    return validate_forest(subdivide_long_edges(raw))


# ---------------------------------------------------------------------------
# layer orders


def derive_layer_orders(forest: LayeredForest) -> LayerOrders:
    by_tree = []
    for t in forest.trees:
        orders: dict[int, list[Vertex]] = {}
        for v in t.vertices.values():
            orders.setdefault(v.layer, []).append(v)
        by_tree.append(
            {
                j: tuple(v.id for v in sorted(vs, key=lambda v: v.leaf_span[0]))
                for j, vs in sorted(orders.items())
            }
        )
    return LayerOrders(forest.num_layers, tuple(by_tree))


def embedding_drawing(forest: LayeredForest, orders: LayerOrders | None = None) -> Drawing:
    """Concatenate the per-tree orders tree by tree on every layer above the leaves."""
    orders = orders or derive_layer_orders(forest)
    layers = [forest.leaf_order]
    for j in range(2, forest.num_layers + 1):
        layers.append(tuple(v for seq in orders.chains(j) for v in seq))
    return Drawing(tuple(tuple(seq) for seq in layers))


# ---------------------------------------------------------------------------
# crossings


def check_drawing(forest: LayeredForest, drawing: Drawing, orders: LayerOrders | None = None) -> None:
    """Raise :class:`InvalidDrawing` unless every layer is a linear extension of its partial order."""
    orders = orders or derive_layer_orders(forest)
    if len(drawing.layers) != forest.num_layers:
        raise InvalidDrawing(f"drawing has {len(drawing.layers)} layers, forest has {forest.num_layers}")
    if tuple(drawing.order(1)) != forest.leaf_order:
        raise InvalidDrawing("layer 1 differs from the fixed leaf order")
    for j in range(2, forest.num_layers + 1):
        seq = drawing.order(j)
        expected = set(forest.layer_vertices(j))
        if len(seq) != len(set(seq)) or set(seq) != expected:
            raise InvalidDrawing(f"layer {j} is not a permutation of its vertices")
        for i in range(forest.k):
            own = tuple(v for v in seq if forest.tree_of[v] == i)
            if own != orders.tree_order(i, j):
                raise InvalidDrawing(f"layer {j} breaks the embedding of tree {i}")


def crossing_pairs(forest: LayeredForest, x: Mapping[str, float]) -> Iterator[tuple[Edge, Edge]]:
    """Yield every crossing pair of edges given horizontal coordinates ``x``.

    Only the relative order of coordinates within a layer matters.
    """
    for j in range(1, forest.num_layers):
        strip = forest.strip_edges(j)
        for (u1, v1), (u2, v2) in combinations(strip, 2):
            if u1 == u2 or v1 == v2:
                continue
            if (x[u1] < x[u2]) != (x[v1] < x[v2]):
                yield (u1, v1), (u2, v2)


def count_crossings(forest: LayeredForest, drawing: Drawing, check: bool = True) -> int:
    if check:
        check_drawing(forest, drawing)
    return sum(1 for _ in crossing_pairs(forest, drawing.index))


def count_crossings_by_edge_pairs(forest: LayeredForest, drawing: Drawing) -> int:
    """Same count as :func:`count_crossings`, scanning all edge pairs globally."""
    x = drawing.index
    layer = {v: forest.layer(v) for v in x}
    total = 0
    for (u1, v1), (u2, v2) in combinations(forest.edges(), 2):
        if layer[u1] != layer[u2] or len({u1, v1, u2, v2}) < 4:
            continue
        total += (x[u1] - x[u2]) * (x[v1] - x[v2]) < 0
    return total


def intra_tree_crossings(forest: LayeredForest, drawing: Drawing) -> list[int]:
    """Crossings between two edges of the same tree, per tree."""
    out = [0] * forest.k
    for (u1, _), (u2, _) in crossing_pairs(forest, drawing.index):
        a, b = forest.tree_of[u1], forest.tree_of[u2]
        if a == b:
            out[a] += 1
    return out


# ---------------------------------------------------------------------------
# cross-tree ordering constraints


def normalize_constraints(forest: LayeredForest, pairs: Iterable[Sequence[str]]) -> tuple[Constraint, ...]:
    out = []
    for pair in pairs:
        if len(pair) != 2:
            raise ForestError(f"constraint {pair!r} is not a pair")
        x, y = pair
        for v in (x, y):
            if v not in forest.tree_of:
                raise ForestError(f"constraint mentions unknown vertex {v!r}")
        if forest.layer(x) != forest.layer(y):
            raise ForestError(f"constraint ({x!r}, {y!r}) relates vertices on different layers")
        if x == y:
            raise ForestError(f"constraint ({x!r}, {y!r}) relates a vertex to itself")
        out.append((x, y))
    return tuple(out)


def satisfies(drawing: Drawing, constraints: Iterable[Constraint]) -> bool:
    idx = drawing.index
    return all(idx[x] < idx[y] for x, y in constraints)
