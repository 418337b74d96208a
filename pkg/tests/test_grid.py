from __future__ import annotations

import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import forest, instance_m, recount_insertion
from layered_trees.errors import GridTooLarge, Infeasible, NotThreeLayers, OutOfGrid
from layered_trees.forest import Drawing, count_crossings, derive_layer_orders, satisfies
from layered_trees.generator import gen_instance, gen_three_layer
from layered_trees.grid import (
    compute_insertion_tables,
    decode_path,
    encode_order,
    grid_edge_weight,
    path_weight,
    solve_fixed_orders,
    solve_three_layer,
    star_crossings,
    weight_arrays,
)
from layered_trees.oracle import brute_force_min, enumerate_layer_extensions
from layered_trees.two_tree import solve_two_trees


def random_roots(f, rng):
    roots = f.layer_vertices(3)
    rng.shuffle(roots)
    return roots


# --- insertion tables -------------------------------------------------------------


def test_instance_m_tables():
    # values frozen from recount_insertion, i.e. exhaustive pair counting
    f = instance_m()
    t = compute_insertion_tables(f, None, ["R1", "R2"])
    assert t.values[1]["A"] == (1, 4)
    assert t.values[0]["B"] == (4, 1)
    for v, i in (("A", 1), ("B", 0)):
        for p in range(2):
            assert t.cro(v, i, p) == recount_insertion(f, ["R1", "R2"], v, i, p)


def test_tree_without_middle_vertices():
    f = forest(
        3,
        [
            ("R1", {"a1": 1, "a2": 1, "A": 2, "R1": 3}, [("a1", "A"), ("a2", "A"), ("A", "R1")]),
            ("c", {"c": 1}, []),
        ],
        ["a1", "c", "a2"],
    )
    t = compute_insertion_tables(f, None, ["R1"])
    assert t.values[1]["A"] == (0,)
    assert t.values[0] == {}


def test_empty_star_never_crosses():
    assert star_crossings([], [(1, 0), (2, 3)], left=True) == 0
    assert star_crossings([], [(1, 0), (2, 3)], left=False) == 0


def test_not_three_layers():
    f = gen_instance(1, 2, 4, 12)
    with pytest.raises(NotThreeLayers):
        compute_insertion_tables(f, None, [])
    with pytest.raises(NotThreeLayers):
        solve_three_layer(f)


@pytest.mark.parametrize("seed", range(40))
def test_incremental_tables_match_recount(seed):
    rng = random.Random(seed)
    f = gen_instance(seed, 2 + seed % 3, 3, 8 + seed % 12)
    roots = random_roots(f, rng)
    t = compute_insertion_tables(f, None, roots)
    for i, row in enumerate(t.values):
        for v, vec in row.items():
            assert list(vec) == [recount_insertion(f, roots, v, i, p) for p in range(len(vec))]


# --- grid weights -------------------------------------------------------------------


def test_single_tree_weights_are_zero():
    f = gen_instance(3, 1, 3, 9)
    t = compute_insertion_tables(f, None, f.layer_vertices(3))
    for x in range(t.sizes[0]):
        assert grid_edge_weight(t, (x,), 0) == 0


def test_instance_m_weights():
    t = compute_insertion_tables(instance_m(), None, ["R1", "R2"])
    assert grid_edge_weight(t, (0, 0), 0) == 1
    assert grid_edge_weight(t, (0, 0), 1) == 4
    with pytest.raises(OutOfGrid):
        grid_edge_weight(t, (1, 0), 0)
    with pytest.raises(OutOfGrid):
        grid_edge_weight(t, (0,), 0)


@pytest.mark.parametrize("seed", range(20))
def test_weight_arrays_match_edge_weights(seed):
    rng = random.Random(seed)
    f = gen_instance(seed, 2 + seed % 3, 3, 12)
    t = compute_insertion_tables(f, None, random_roots(f, rng))
    mid = [v for c in t.chains for v in c]
    cons = []
    for x, y in combinations(mid, 2):
        if t.tree_of[x] != t.tree_of[y] and rng.random() < 0.2:
            cons.append((x, y))
    arrays = weight_arrays(t, cons)
    for j, arr in enumerate(arrays):
        for coord in np.ndindex(arr.shape):
            if coord[j] < t.sizes[j]:
                assert arr[coord] == grid_edge_weight(t, coord, j, cons)
            else:
                assert arr[coord] == t.infinity


# --- paths ------------------------------------------------------------------------


def test_instance_m_fixed_orders():
    f = instance_m()
    sol = solve_fixed_orders(f, ["R1", "R2"])
    assert sol.path.steps == (0, 1)
    assert sol.path.weight == 2
    assert sol.drawing.order(2) == ("A", "B")
    assert sol.crossings == 1 == count_crossings(f, sol.drawing)

    forced = solve_fixed_orders(f, ["R1", "R2"], [("B", "A")])
    assert forced.path.weight == 8
    assert forced.crossings == 4 == count_crossings(f, forced.drawing)
    assert forced.drawing.order(2) == ("B", "A")


def test_instance_m_both_paths():
    t = compute_insertion_tables(instance_m(), None, ["R1", "R2"])
    assert path_weight(t, (0, 1)) == 2
    assert path_weight(t, (1, 0)) == 8


def test_instance_m_all_root_orders():
    f = instance_m()
    sol = solve_three_layer(f)
    assert sol.crossings == 1
    assert sol.root_order == ("R1", "R2")
    assert solve_fixed_orders(f, ["R2", "R1"]).crossings == 2


def test_single_tree():
    f = gen_instance(5, 1, 3, 10)
    sol = solve_three_layer(f)
    assert sol.crossings == 0


def test_two_layer_forest():
    f = gen_instance(11, 3, 2, 12)
    sol = solve_three_layer(f)
    assert sol.crossings == brute_force_min(f).crossings
    assert sol.drawing.layers[0] == f.leaf_order


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(4, 14))
def test_path_order_bijection(seed, k, n):
    f = gen_instance(seed, k, 3, max(n, k))
    chains = derive_layer_orders(f).chains(2)
    seen = set()
    for order in enumerate_layer_extensions(chains):
        steps = encode_order(chains, order)
        assert len(steps) == sum(len(c) for c in chains)
        assert decode_path(chains, steps) == order
        seen.add(steps)
    assert len(seen) == len(list(enumerate_layer_extensions(chains)))


def test_bad_path_rejected():
    chains = [("a", "b"), ("c",)]
    with pytest.raises(OutOfGrid):
        decode_path(chains, (0, 1))
    with pytest.raises(OutOfGrid):
        encode_order(chains, ("b", "a", "c"))


def random_path(chains, rng):
    steps = [i for i, c in enumerate(chains) for _ in c]
    rng.shuffle(steps)
    return steps


@pytest.mark.parametrize("seed", range(30))
def test_weight_is_twice_crossings(seed):
    rng = random.Random(seed)
    f = gen_instance(seed, 2 + seed % 4, 3, 10 + seed % 15)
    roots = random_roots(f, rng)
    t = compute_insertion_tables(f, None, roots)
    for _ in range(10):
        steps = random_path(t.chains, rng)
        d = Drawing((f.leaf_order, decode_path(t.chains, steps), tuple(roots)))
        assert path_weight(t, steps) == 2 * count_crossings(f, d)


@pytest.mark.parametrize("seed", range(20))
def test_charging_law(seed):
    rng = random.Random(seed)
    f = gen_instance(seed, 3, 3, 16)
    roots = random_roots(f, rng)
    t = compute_insertion_tables(f, None, roots)
    steps = random_path(t.chains, rng)
    order = decode_path(t.chains, steps)
    d = Drawing((f.leaf_order, order, tuple(roots)))
    charged = 0
    for v in order:
        tv = f.tree_of[v]
        before = {i: 0 for i in range(f.k)}
        for u in order[: order.index(v)]:
            before[f.tree_of[u]] += 1
        charged += sum(t.cro(v, i, before[i]) for i in range(f.k) if i != tv)
    assert charged == 2 * count_crossings(f, d)


def test_lightest_path_is_colex_smallest_on_ties():
    # two independent single-edge trees with disjoint blocks: both orders cost nothing
    f = forest(
        3,
        [
            ("R1", {"a": 1, "A": 2, "R1": 3}, [("a", "A"), ("A", "R1")]),
            ("R2", {"b": 1, "B": 2, "R2": 3}, [("b", "B"), ("B", "R2")]),
        ],
        ["a", "b"],
    )
    t = compute_insertion_tables(f, None, ["R1", "R2"])
    assert path_weight(t, (0, 1)) == 0
    assert path_weight(t, (1, 0)) == 4
    sol = solve_fixed_orders(f, ["R1", "R2"])
    assert sol.path.steps == (0, 1)


@pytest.mark.parametrize("seed", range(60))
def test_grid_matches_oracle(seed):
    k = 2 + seed % 3
    f = gen_instance(seed, k, 3, max(k + 2, 6 + seed % 9))
    sol = solve_three_layer(f)
    assert sol.crossings == brute_force_min(f).crossings == count_crossings(f, sol.drawing)


@pytest.mark.parametrize("seed", range(30))
def test_grid_matches_dp_for_two_trees(seed):
    f = gen_instance(seed, 2, 3, 8 + seed)
    assert solve_three_layer(f).crossings == solve_two_trees(f).crossings


# --- constraints and guards ----------------------------------------------------------


def test_root_constraints_filter_permutations():
    f = instance_m()
    sol = solve_three_layer(f, [("R2", "R1")])
    assert sol.root_order == ("R2", "R1")
    assert sol.crossings == 2
    with pytest.raises(Infeasible):
        solve_three_layer(f, [("R2", "R1"), ("R1", "R2")])


def test_contradictory_constraints():
    f = instance_m()
    with pytest.raises(Infeasible):
        solve_three_layer(f, [("A", "B"), ("B", "A")])
    with pytest.raises(Infeasible):
        brute_force_min(f, [("A", "B"), ("B", "A")])
    with pytest.raises(Infeasible):
        solve_three_layer(f, [("b1", "a1")])


@pytest.mark.parametrize("seed", range(40))
def test_constraints_match_filtered_oracle(seed):
    rng = random.Random(seed)
    f = gen_instance(seed, 2 + seed % 2, 3, 9 + seed % 5)
    mid = f.layer_vertices(2)
    pairs = [(x, y) for x, y in combinations(mid, 2) if f.tree_of[x] != f.tree_of[y]]
    cons = [p if rng.random() < 0.5 else p[::-1] for p in rng.sample(pairs, min(len(pairs), 2))]
    try:
        want = brute_force_min(f, cons).crossings
    except Infeasible:
        with pytest.raises(Infeasible):
            solve_three_layer(f, cons)
        return
    sol = solve_three_layer(f, cons)
    assert sol.crossings == want
    assert satisfies(sol.drawing, cons)


def test_size_guard():
    f = gen_three_layer(0, [50] * 6, max_leaves=1)
    with pytest.raises(GridTooLarge) as err:
        solve_three_layer(f)
    assert err.value.required == 51**6


def test_guard_respects_custom_cap():
    f = gen_three_layer(0, [3, 3])
    with pytest.raises(GridTooLarge):
        solve_three_layer(f, max_cells=15)
    assert solve_three_layer(f, max_cells=16).crossings >= 0
