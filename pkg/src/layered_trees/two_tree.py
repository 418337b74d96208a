"""Exact crossing minimization for two layered trees on any number of layers.

The first tree is kept in its embedding.  Every vertex of the second tree is
described by its *position* on its layer: the number of first-tree vertices to
its left.  A table ``o[v, p]`` holds the fewest crossings the subtree of ``v``
can have against the first tree when ``v`` sits at position ``p``; it is filled
from layer 2 upwards and backtracked from the best root position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotTwoTrees, TableNotFilled
from .forest import Drawing, LayeredForest, LayerOrders, Tree, derive_layer_orders


@dataclass(frozen=True)
class CrossingTable:
    """``cro(x, y, z)``: crossings of a second-tree edge from position ``y`` on
    layer ``x`` to position ``z`` on layer ``x + 1`` with the fixed tree's edges."""

    num_layers: int
    sizes: tuple[int, ...]  # sizes[j - 1] = fixed-tree vertices on layer j
    tables: dict[int, np.ndarray]
    ideal: dict[int, np.ndarray]  # ideal[j][p] = ideal position on layer j - 1

    def positions(self, j: int) -> int:
        """Number of positions on layer ``j``."""
        return self.sizes[j - 1] + 1

    def cro(self, x: int, y: int, z: int) -> float:
        t = self.tables.get(x)
        if t is None or not (0 <= y < t.shape[0] and 0 <= z < t.shape[1]):
            return math.inf
        return int(t[y, z])


def build_crossing_table(
    forest: LayeredForest, orders: LayerOrders | None = None, fixed: int = 0
) -> CrossingTable:
    if forest.k != 2:
        raise NotTwoTrees(f"expected 2 trees, got {forest.k}")
    orders = orders or derive_layer_orders(forest)
    tree = forest.trees[fixed]
    ell = forest.num_layers
    sizes = tuple(orders.size(fixed, j) for j in range(1, ell + 1))
    index = {v: a for j in range(1, ell + 1) for a, v in enumerate(orders.tree_order(fixed, j), start=1)}

    tables: dict[int, np.ndarray] = {}
    ideal: dict[int, np.ndarray] = {}
    for x in range(1, ell):
        a, b = sizes[x - 1], sizes[x]
        hits = np.zeros((a + 1, b + 1), dtype=np.int64)
        for v in orders.tree_order(fixed, x):
            parent = tree.vertices[v].parent
            if parent is not None:
                hits[index[v], index[parent]] += 1
        # le[y, z] = fixed edges with source index <= y and target index <= z
        le = hits.cumsum(axis=0).cumsum(axis=1)
        tables[x] = le[:, [b]] + le[[a], :] - 2 * le
        parents = np.sort(_parent_indices(orders, tree, fixed, x, index))
        ideal[x + 1] = np.searchsorted(parents, np.arange(b + 1), side="right")
    return CrossingTable(ell, sizes, tables, ideal)


def _parent_indices(
    orders: LayerOrders, tree: Tree, fixed: int, x: int, index: dict[str, int]
) -> np.ndarray:
    # parent index of every fixed-tree vertex on layer x; a root never lies left of any gap
    out = []
    for v in orders.tree_order(fixed, x):
        parent = tree.vertices[v].parent
        out.append(index[parent] if parent is not None else np.iinfo(np.int64).max)
    return np.array(out, dtype=np.int64)


def ideal_position(table: CrossingTable, j: int, p: int) -> int:
    """Position on layer ``j - 1`` reached by walking straight down the gap at ``p`` on layer ``j``."""
    return int(table.ideal[j][p])


@dataclass(frozen=True)
class DpTable:
    layers: dict[int, tuple[str, ...]]  # free-tree vertices per layer >= 2, embedding order
    values: dict[int, np.ndarray]  # values[j][row, p]
    row: dict[str, tuple[int, int]]
    choice: dict[str, np.ndarray]  # non-leaf child -> chosen position per parent position
    leaf_position: dict[str, int]

    def o(self, v: str, p: int) -> float:
        if v not in self.row:
            raise TableNotFilled(v)
        j, r = self.row[v]
        vals = self.values[j][r]
        return int(vals[p]) if 0 <= p < vals.size else math.inf

    def chosen_position(self, child: str, p: int) -> int:
        """Position the table picked for ``child`` when its parent sits at ``p``."""
        if child in self.leaf_position:
            return self.leaf_position[child]
        if child not in self.choice:
            raise TableNotFilled(child)
        return int(self.choice[child][p])


def optimal_positions(table: DpTable, v: str) -> range:
    if v not in table.row:
        raise TableNotFilled(v)
    j, r = table.row[v]
    vals = table.values[j][r]
    best = np.flatnonzero(vals == vals.min())
    return range(int(best[0]), int(best[-1]) + 1)


@dataclass(frozen=True)
class TwoTreeSolution:
    drawing: Drawing
    crossings: int
    root_position: int
    dp: DpTable
    cro: CrossingTable
    fixed: int


def fill_table(
    forest: LayeredForest, orders: LayerOrders, cro: CrossingTable, fixed: int = 0
) -> DpTable:
    free = 1 - fixed
    tree = forest.trees[free]
    top = tree.vertices[tree.root].layer

    leaf_position: dict[str, int] = {}
    fixed_seen = 0
    for v in forest.leaf_order:
        t = forest.tree_of[v]
        if t == fixed:
            fixed_seen += 1
        elif t == free:
            leaf_position[v] = fixed_seen

    layers: dict[int, tuple[str, ...]] = {}
    values: dict[int, np.ndarray] = {}
    row: dict[str, tuple[int, int]] = {}
    choice: dict[str, np.ndarray] = {}
    for j in range(2, top + 1):
        verts = orders.tree_order(free, j)
        below = cro.tables[j - 1]
        n_pos = below.shape[1]
        mat = np.zeros((len(verts), n_pos), dtype=np.int64)
        # scale keeps (total asc, crossings desc, q asc) as a single argmin key
        scale = int(below.max()) + 1
        cols = np.arange(n_pos)
        for r, v in enumerate(verts):
            row[v] = (j, r)
            for c in tree.vertices[v].children:
                if j == 2:
                    mat[r] += below[leaf_position[c]]
                    continue
                jc, rc = row[c]
                total = values[jc][rc][:, None] + below
                q = np.argmin(total * scale - below, axis=0)
                choice[c] = q
                mat[r] += total[q, cols]
        layers[j] = verts
        values[j] = mat
    return DpTable(layers, values, row, choice, leaf_position)


def solve_two_trees(forest: LayeredForest, fixed: int = 0) -> TwoTreeSolution:
    """Minimum-crossing drawing of a two-tree forest keeping both embeddings.

    Runs in O(n1^2 * n2) time for ``n1`` vertices in the fixed tree and ``n2``
    in the other.  Ties between root positions go to the smallest position.
    """
    if forest.k != 2:
        raise NotTwoTrees(f"expected 2 trees, got {forest.k}")
    orders = derive_layer_orders(forest)
    cro = build_crossing_table(forest, orders, fixed)
    dp = fill_table(forest, orders, cro, fixed)

    free = 1 - fixed
    tree = forest.trees[free]
    root = tree.root
    top = tree.vertices[root].layer
    position: dict[str, int] = dict(dp.leaf_position)
    if top >= 2:
        root_vals = dp.values[top][dp.row[root][1]]
        best = int(np.argmin(root_vals))
        crossings = int(root_vals[best])
        position[root] = best
        for j in range(top, 2, -1):
            for v in dp.layers[j]:
                for c in tree.vertices[v].children:
                    position[c] = dp.chosen_position(c, position[v])
    else:
        best, crossings = 0, 0

    layers = [forest.leaf_order]
    for j in range(2, forest.num_layers + 1):
        keyed = [((a, 0, 0), v) for a, v in enumerate(orders.tree_order(fixed, j), start=1)]
        keyed += [((position[v], 1, r), v) for r, v in enumerate(orders.tree_order(free, j))]
        layers.append(tuple(v for _, v in sorted(keyed)))
    drawing = Drawing(tuple(tuple(seq) for seq in layers))
    return TwoTreeSolution(drawing, crossings, best, dp, cro, fixed)
