"""Exact crossing minimization for k trees on at most three layers.

With the leaf order and the root order fixed, every embedding-preserving order
of layer 2 is an interleaving of the k per-tree orders, i.e. a monotone path
through a k-dimensional grid from ``(0, ..., 0)`` to ``(n_1, ..., n_k)``.
Stepping along dimension ``j`` places the next vertex ``v`` of tree ``j``;
the step costs the crossings ``v``'s star has with every other tree given how
many of that tree's vertices are already placed.  Each crossing is charged to
both of its layer-2 endpoints, so a path weighs twice its crossing count.

The grid is never built as a graph: a distance array indexed by
colexicographic rank is swept in increasing order, which is topological.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import ForestError, GridTooLarge, Infeasible, NotThreeLayers, OutOfGrid
from .forest import (
    Constraint,
    Drawing,
    LayeredForest,
    LayerOrders,
    derive_layer_orders,
    normalize_constraints,
)

DEFAULT_MAX_CELLS = 10**8

# one strip-tagged edge end: (strip, position of the endpoint off layer 2)
StarEdge = tuple[int, int]


@dataclass(frozen=True)
class InsertionTables:
    chains: tuple[tuple[str, ...], ...]  # layer-2 order of every tree
    root_order: tuple[str, ...]
    tree_of: dict[str, int]
    values: tuple[dict[str, tuple[int, ...]], ...]  # values[i][v][p]
    infinity: int

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.chains)

    def cro(self, v: str, tree: int, p: int) -> int:
        return self.values[tree][v][p]


@dataclass(frozen=True)
class GridPath:
    steps: tuple[int, ...]  # dimension of each step
    weight: int
    order: tuple[str, ...]  # induced order of layer 2


def _stars(forest: LayeredForest, root_order: Sequence[str]) -> dict[str, list[StarEdge]]:
    leaf_pos = {v: x for x, v in enumerate(forest.leaf_order)}
    root_pos = {v: x for x, v in enumerate(root_order)}
    stars: dict[str, list[StarEdge]] = {}
    for t in forest.trees:
        for v in t.on_layer(2):
            star = [(1, leaf_pos[c]) for c in v.children]
            if v.parent is not None:
                star.append((2, root_pos[v.parent]))
            stars[v.id] = star
    return stars


def _check_three_layers(forest: LayeredForest) -> None:
    if forest.num_layers > 3:
        raise NotThreeLayers(f"grid solver handles at most 3 layers, forest has {forest.num_layers}")


def _check_root_order(forest: LayeredForest, root_order: Sequence[str]) -> tuple[str, ...]:
    root_order = tuple(root_order)
    top = forest.layer_vertices(3) if forest.num_layers >= 3 else []
    if len(root_order) != len(set(root_order)) or set(root_order) != set(top):
        raise ForestError(f"root order {list(root_order)} is not a permutation of layer 3 {sorted(top)}")
    return root_order


def star_crossings(star: Sequence[StarEdge], other: Sequence[StarEdge], left: bool) -> int:
    """Crossings between two stars centred on distinct layer-2 vertices.

    ``left`` tells whether the first centre lies left of the second.
    """
    total = 0
    for s, a in star:
        for t, b in other:
            if s == t and (a > b) == left:
                total += 1
    return total


def compute_insertion_tables(
    forest: LayeredForest, orders: LayerOrders | None, root_order: Sequence[str]
) -> InsertionTables:
    """All insertion crossing counts, O(n^2) overall.

    For each tree ``i`` and foreign layer-2 vertex ``v`` the count at position 0
    is found by checking ``v``'s star against every star of tree ``i``; moving
    ``v`` past the p-th vertex ``b`` of tree ``i`` then only flips the pairs
    between the star of ``v`` and the star of ``b``.
    """
    _check_three_layers(forest)
    orders = orders or derive_layer_orders(forest)
    root_order = _check_root_order(forest, root_order)
    chains = tuple(orders.chains(2))
    stars = _stars(forest, root_order)
    layer2 = [v for c in chains for v in c]
    tree_of = {v: forest.tree_of[v] for v in layer2}

    values = []
    for i, chain in enumerate(chains):
        row: dict[str, tuple[int, ...]] = {}
        for v in layer2:
            if tree_of[v] == i:
                continue
            sv = stars[v]
            cur = sum(star_crossings(sv, stars[b], left=True) for b in chain)
            vec = [cur]
            for b in chain:
                sb = stars[b]
                cur += star_crossings(sv, sb, left=False) - star_crossings(sv, sb, left=True)
                vec.append(cur)
            row[v] = tuple(vec)
        values.append(row)

    m = len(forest.edges())
    infinity = 2 * math.comb(m, 2) + 1
    return InsertionTables(chains, root_order, tree_of, tuple(values), infinity)


def _forbidden(
    tables: InsertionTables, constraints: Sequence[Constraint]
) -> list[tuple[int, int, int, int, bool]]:
    """Step bans for cross-tree constraints, as ``(dim, at, other_dim, bound, at_least)`` tuples.

    A step along ``dim`` leaving coordinate ``at`` is banned when the coordinate
    in ``other_dim`` is ``>= bound`` (``at_least``) or ``< bound`` (otherwise).
    """
    rank = {v: (i, r) for i, c in enumerate(tables.chains) for r, v in enumerate(c)}
    bans = []
    for x, y in constraints:
        if x not in rank or y not in rank:
            continue
        (a, i), (b, j) = rank[x], rank[y]
        if a == b:
            if i > j:
                raise Infeasible(f"{x!r} before {y!r} contradicts the embedding of tree {a}")
            continue
        # x is the (i+1)-th of tree a, y the (j+1)-th of tree b
        bans.append((a, i, b, j + 1, True))
        bans.append((b, j, a, i + 1, False))
    return bans


def grid_edge_weight(
    tables: InsertionTables,
    coord: Sequence[int],
    dim: int,
    constraints: Iterable[Constraint] = (),
) -> int:
    sizes = tables.sizes
    if len(coord) != len(sizes) or not 0 <= dim < len(sizes):
        raise OutOfGrid(f"coordinate {tuple(coord)} / dimension {dim} does not fit a {len(sizes)}-dim grid")
    if any(not 0 <= x <= n for x, n in zip(coord, sizes)) or coord[dim] >= sizes[dim]:
        raise OutOfGrid(f"no step along dimension {dim} from {tuple(coord)}")
    for d, at, other, bound, at_least in _forbidden(tables, list(constraints)):
        if d == dim and coord[dim] == at and (coord[other] >= bound) == at_least:
            return tables.infinity
    v = tables.chains[dim][coord[dim]]
    w = sum(tables.values[i][v][coord[i]] for i in range(len(sizes)) if i != dim)
    return min(w, tables.infinity)


def weight_arrays(tables: InsertionTables, constraints: Sequence[Constraint] = ()) -> list[np.ndarray]:
    """Weights of all grid steps, one array per dimension over the full grid shape.

    Entry ``[x]`` of array ``j`` is the weight of the step from ``x`` along ``j``;
    entries with ``x_j = n_j`` (no such step) hold the infinity sentinel.
    """
    sizes = tables.sizes
    k = len(sizes)
    shape = tuple(n + 1 for n in sizes)
    inf = tables.infinity
    out = []
    for j in range(k):
        w = np.zeros(shape, dtype=np.int64)
        for i in range(k):
            if i == j:
                continue
            mat = np.zeros((sizes[j] + 1, sizes[i] + 1), dtype=np.int64)
            for r, v in enumerate(tables.chains[j]):
                mat[r] = tables.values[i][v]
            view = [1] * k
            view[j], view[i] = mat.shape
            # reshape needs the two axes in increasing order
            w += (mat if j < i else mat.T).reshape(view)
        idx = [slice(None)] * k
        idx[j] = sizes[j]
        w[tuple(idx)] = inf
        out.append(w)
    for d, at, other, bound, at_least in _forbidden(tables, constraints):
        idx = [slice(None)] * k
        idx[d] = at
        idx[other] = slice(bound, None) if at_least else slice(0, bound)
        out[d][tuple(idx)] = inf
    return [np.minimum(w, inf) for w in out]


def grid_cells(sizes: Iterable[int]) -> int:
    return math.prod(n + 1 for n in sizes)


def lightest_path(tables: InsertionTables, constraints: Sequence[Constraint] = ()) -> GridPath:
    """Lightest st-path; among equal weights the colexicographically smallest predecessor wins."""
    sizes = tables.sizes
    k = len(sizes)
    inf = tables.infinity
    n_cells = grid_cells(sizes)
    strides = [1] * k
    for j in range(1, k):
        strides[j] = strides[j - 1] * (sizes[j - 1] + 1)
    # Fortran order puts the first coordinate fastest, matching the strides
    weights = [w.ravel(order="F").tolist() for w in weight_arrays(tables, constraints)]
    dims = list(range(k - 1, -1, -1))

    dist = [inf] * n_cells
    pred = [-1] * n_cells
    dist[0] = 0
    coord = [0] * k
    for idx in range(1, n_cells):
        for j in range(k):  # odometer increment
            if coord[j] < sizes[j]:
                coord[j] += 1
                break
            coord[j] = 0
        best, arg = inf, -1
        for j in dims:
            if coord[j]:
                src = idx - strides[j]
                cand = dist[src] + weights[j][src]
                if cand < best:
                    best, arg = cand, j
        dist[idx] = best
        pred[idx] = arg

    weight = dist[-1]
    if weight >= inf:
        raise Infeasible("no order of layer 2 satisfies the constraints")
    steps = []
    idx = n_cells - 1
    while idx:
        j = pred[idx]
        steps.append(j)
        idx -= strides[j]
    steps.reverse()
    return GridPath(tuple(steps), int(weight), decode_path(tables.chains, steps))


def decode_path(chains: Sequence[Sequence[str]], steps: Sequence[int]) -> tuple[str, ...]:
    heads = [0] * len(chains)
    out = []
    for j in steps:
        out.append(chains[j][heads[j]])
        heads[j] += 1
    if heads != [len(c) for c in chains]:
        raise OutOfGrid("step sequence does not end at the sink")
    return tuple(out)


def encode_order(chains: Sequence[Sequence[str]], order: Sequence[str]) -> tuple[int, ...]:
    dim = {v: i for i, c in enumerate(chains) for v in c}
    steps = tuple(dim[v] for v in order)
    if decode_path(chains, steps) != tuple(order):
        raise OutOfGrid("order does not extend the per-tree orders")
    return steps


def path_weight(tables: InsertionTables, steps: Sequence[int], constraints: Iterable[Constraint] = ()) -> int:
    constraints = list(constraints)
    coord = [0] * len(tables.chains)
    total = 0
    for j in steps:
        total = min(total + grid_edge_weight(tables, coord, j, constraints), tables.infinity)
        coord[j] += 1
    return total


@dataclass(frozen=True)
class ThreeLayerSolution:
    drawing: Drawing
    crossings: int
    path: GridPath
    root_order: tuple[str, ...]


def _drawing(forest: LayeredForest, order: Sequence[str], root_order: Sequence[str]) -> Drawing:
    layers = [forest.leaf_order, tuple(order)]
    if forest.num_layers == 3:
        layers.append(tuple(root_order))
    return Drawing(tuple(layers))


def _guard(orders: LayerOrders, max_cells: int) -> None:
    cells = grid_cells(len(c) for c in orders.chains(2))
    if cells > max_cells:
        raise GridTooLarge(cells, max_cells)


def _check_leaf_constraints(forest: LayeredForest, cons: Sequence[Constraint]) -> None:
    pos = {v: x for x, v in enumerate(forest.leaf_order)}
    for x, y in cons:
        if forest.layer(x) == 1 and pos[x] > pos[y]:
            raise Infeasible(f"{x!r} before {y!r} contradicts the leaf order")


def solve_fixed_orders(
    forest: LayeredForest,
    root_order: Sequence[str],
    constraints: Iterable[Sequence[str]] = (),
    max_cells: int = DEFAULT_MAX_CELLS,
) -> ThreeLayerSolution:
    """Best layer-2 order for a given root order on layer 3."""
    _check_three_layers(forest)
    orders = derive_layer_orders(forest)
    cons = normalize_constraints(forest, constraints)
    _guard(orders, max_cells)
    _check_leaf_constraints(forest, cons)
    root_order = _check_root_order(forest, root_order)
    pos = {v: x for x, v in enumerate(root_order)}
    for x, y in cons:
        if forest.layer(x) == 3 and pos[x] > pos[y]:
            raise Infeasible(f"{x!r} before {y!r} contradicts the root order")
    tables = compute_insertion_tables(forest, orders, root_order)
    path = lightest_path(tables, [c for c in cons if forest.layer(c[0]) == 2])
    return ThreeLayerSolution(_drawing(forest, path.order, root_order), path.weight // 2, path, root_order)


def solve_three_layer(
    forest: LayeredForest,
    constraints: Iterable[Sequence[str]] = (),
    fixed_root_order: Sequence[str] | None = None,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> ThreeLayerSolution:
    """Minimum-crossing drawing of k trees on at most three layers.

    Without ``fixed_root_order`` every permutation of the layer-3 roots is
    tried; the first permutation reaching the minimum is kept.
    """
    _check_three_layers(forest)
    cons = normalize_constraints(forest, constraints)
    if fixed_root_order is not None:
        return solve_fixed_orders(forest, fixed_root_order, cons, max_cells)
    orders = derive_layer_orders(forest)
    _guard(orders, max_cells)
    _check_leaf_constraints(forest, cons)

    top = forest.layer_vertices(3) if forest.num_layers >= 3 else []
    top_cons = [c for c in cons if forest.layer(c[0]) == 3]
    mid_cons = [c for c in cons if forest.layer(c[0]) == 2]
    best: ThreeLayerSolution | None = None
    for perm in permutations(top):
        pos = {v: x for x, v in enumerate(perm)}
        if any(pos[x] > pos[y] for x, y in top_cons):
            continue
        tables = compute_insertion_tables(forest, orders, perm)
        try:
            path = lightest_path(tables, mid_cons)
        except Infeasible:
            continue
        if best is None or path.weight < best.path.weight:
            best = ThreeLayerSolution(_drawing(forest, path.order, perm), path.weight // 2, path, perm)
    if best is None:
        raise Infeasible("no drawing satisfies the constraints")
    return best
