"""Shared fixtures-by-function and independent recounts used as test oracles."""

from __future__ import annotations

from itertools import combinations

from layered_trees.forest import LayeredForest, RawForest, RawTree, build_forest, derive_layer_orders
from layered_trees.two_tree import build_crossing_table, ideal_position, optimal_positions


def forest(num_layers, trees, leaf_order) -> LayeredForest:
    """``trees`` is a list of ``(root, {vertex: layer}, [(child, parent), ...])``."""
    raw = RawForest(
        num_layers,
        tuple(RawTree(root, tuple(edges), dict(layer)) for root, layer, edges in trees),
        tuple(leaf_order),
    )
    return build_forest(raw)


def instance_m() -> LayeredForest:
    """a1,a2 -> A -> R1 and b1,b2 -> B -> R2 with leaf order a1 b1 a2 b2."""
    return forest(
        3,
        [
            ("R1", {"a1": 1, "a2": 1, "A": 2, "R1": 3}, [("a1", "A"), ("a2", "A"), ("A", "R1")]),
            ("R2", {"b1": 1, "b2": 1, "B": 2, "R2": 3}, [("b1", "B"), ("b2", "B"), ("B", "R2")]),
        ],
        ["a1", "b1", "a2", "b2"],
    )


def cherries() -> LayeredForest:
    """Two cherries on two layers with interleaved leaves a1 b1 a2 b2."""
    return forest(
        2,
        [
            ("A", {"a1": 1, "a2": 1, "A": 2}, [("a1", "A"), ("a2", "A")]),
            ("B", {"b1": 1, "b2": 1, "B": 2}, [("b1", "B"), ("b2", "B")]),
        ],
        ["a1", "b1", "a2", "b2"],
    )


def fork_and_leaf() -> LayeredForest:
    """Fixed tree R(3) -> A, B (2) -> a, b (1); the other tree is a single-edge path."""
    return forest(
        3,
        [
            ("R", {"a": 1, "b": 1, "A": 2, "B": 2, "R": 3}, [("a", "A"), ("b", "B"), ("A", "R"), ("B", "R")]),
            ("Y", {"y1": 1, "Y": 3}, [("y1", "Y")]),
        ],
        ["a", "y1", "b"],
    )


def recount_cro(f: LayeredForest, fixed: int, x: int, y: int, z: int) -> int:
    """Crossings of a free edge between gap ``y`` on layer ``x`` and gap ``z`` on layer ``x+1``.

    Fixed-tree vertex number ``a`` (1-based) sits at coordinate ``a``; gap ``g``
    sits at ``g + 0.5``.
    """
    orders = derive_layer_orders(f)
    low = {v: a for a, v in enumerate(orders.tree_order(fixed, x), start=1)}
    high = {v: a for a, v in enumerate(orders.tree_order(fixed, x + 1), start=1)}
    total = 0
    for c, p in f.trees[fixed].edges():
        if c in low:
            total += (low[c] < y + 0.5) != (high[p] < z + 0.5)
    return total


def recount_insertion(f: LayeredForest, root_order, v: str, tree: int, p: int) -> int:
    """Crossings between the star of ``v`` and all edges of ``tree`` with ``v`` at position ``p``."""
    orders = derive_layer_orders(f)
    chain = list(orders.tree_order(tree, 2))
    mid = chain[:p] + [v] + chain[p:]
    x = {u: i for i, u in enumerate(f.leaf_order)}
    x.update({u: i for i, u in enumerate(mid)})
    x.update({u: i for i, u in enumerate(root_order)})
    vert = f.vertex(v)
    star = [(c, v) for c in vert.children] + ([(v, vert.parent)] if vert.parent else [])
    others = f.trees[tree].edges()
    total = 0
    for e in star:
        for g in others:
            if f.layer(e[0]) != f.layer(g[0]):
                continue
            total += (x[e[0]] - x[g[0]]) * (x[e[1]] - x[g[1]]) < 0
    return total


def pair_scan(f: LayeredForest, drawing) -> int:
    """Plain all-pairs crossing count from integer coordinates."""
    x = drawing.index
    edges = f.edges()
    total = 0
    for (a, b), (c, d) in combinations(edges, 2):
        if f.layer(a) == f.layer(c) and len({a, b, c, d}) == 4:
            total += (x[a] < x[c]) != (x[b] < x[d])
    return total


# --- structural laws of the two-tree tables, listed as violations ----------------


def ideal_position_violations(f):
    t = build_crossing_table(f)
    top = f.vertex(f.trees[0].root).layer
    bad = []
    for j in range(2, top + 1):
        lo, hi = t.positions(j - 1), t.positions(j)
        prev = None
        for p in range(hi):
            ps = ideal_position(t, j, p)
            if prev is not None and ps < prev:
                bad.append(("order", j, p))
            prev = ps
            for y in range(lo):
                if t.cro(j - 1, y, p) != abs(y - ps):
                    bad.append(("distance", j, p, y))
            for x in range(hi):
                for step in (1, -1):
                    near, far = p + step * x, p + step * (x + 1)
                    if 0 <= far < hi and not (t.cro(j - 1, ps, far) > t.cro(j - 1, ps, near) >= x):
                        bad.append(("target", j, p, x, step))
    return bad


def optimal_interval_violations(sol):
    bad = []
    dp = sol.dp
    for j, verts in dp.layers.items():
        prev = None
        for v in verts:
            vals = [dp.o(v, p) for p in range(dp.values[j].shape[1])]
            best = min(vals)
            arg = [p for p, val in enumerate(vals) if val == best]
            if arg != list(range(arg[0], arg[-1] + 1)):
                bad.append(("interval", v))
            if optimal_positions(dp, v) != range(arg[0], arg[-1] + 1):
                bad.append(("optpos", v))
            lo, hi = arg[0], arg[-1]
            for x in range(len(vals)):
                if lo - x - 1 >= 0 and not vals[lo - x - 1] > vals[lo - x] >= x:
                    bad.append(("left", v, x))
                if hi + x + 1 < len(vals) and not vals[hi + x + 1] > vals[hi + x] >= x:
                    bad.append(("right", v, x))
            if prev is not None and not (prev[0] <= lo and prev[1] <= hi):
                bad.append(("monotone", v))
            prev = (lo, hi)
    return bad


def natpos(sol, child, p_parent, j):
    ps = ideal_position(sol.cro, j, p_parent)
    opt = optimal_positions(sol.dp, child)
    return min(max(ps, opt.start), opt.stop - 1)


def natural_position_violations(sol, f):
    bad = []
    dp, cro = sol.dp, sol.cro
    free = f.trees[1 - sol.fixed]
    for j, verts in dp.layers.items():
        if j < 3:
            continue
        for v in verts:
            children = free.vertices[v].children
            for p in range(dp.values[j].shape[1]):
                total = 0
                positions = []
                for c in children:
                    q = natpos(sol, c, p, j)
                    positions.append(q)
                    total += dp.o(c, q) + cro.cro(j - 1, q, p)
                    if dp.chosen_position(c, p) != q:
                        bad.append(("chosen != natpos", v, c, p))
                if total != dp.o(v, p):
                    bad.append(("sum of natpos terms", v, p))
                if positions != sorted(positions):
                    bad.append(("natpos order", v, p))
    return bad
