"""Seeded random instances.

Randomness comes from numpy's PCG64 bit generator seeded with the given
integer, so an instance is reproducible from ``(seed, k, layers, n, bias)``.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParams
from .forest import LayeredForest, RawForest, RawTree, validate_forest


def _random_tree(rng: np.random.Generator, tree: int, size: int, num_layers: int) -> tuple[RawTree, list[str]]:
    """Random recursive attachment of chains; returns the tree and its leaves in embedding order."""
    layer: dict[str, int] = {}
    children: dict[str, list[str]] = {}
    edges: list[tuple[str, str]] = []

    def new(j: int, parent: str | None) -> str:
        v = f"t{tree}v{len(layer)}"
        layer[v] = j
        children[v] = []
        if parent is not None:
            edges.append((v, parent))
            slot = int(rng.integers(0, len(children[parent]) + 1))
            children[parent].insert(slot, v)
        return v

    def chain_down(top: str) -> None:
        v = top
        while layer[v] > 1:
            v = new(layer[v] - 1, v)

    height = 1 if size == 1 else int(rng.integers(2, min(num_layers, size) + 1))
    root = new(height, None)
    chain_down(root)
    remaining = size - height
    while remaining > 0:
        hosts = [v for v in layer if 2 <= layer[v] <= remaining + 1]
        host = hosts[int(rng.integers(0, len(hosts)))]
        chain_down(new(layer[host] - 1, host))
        remaining -= layer[host] - 1

    leaves: list[str] = []
    stack = [root]
    while stack:
        v = stack.pop()
        if not children[v]:
            leaves.append(v)
        stack.extend(reversed(children[v]))
    return RawTree(root, tuple(edges), layer), leaves


def _interleave(rng: np.random.Generator, seqs: list[list[str]], bias: float) -> list[str]:
    # bias 0: concatenate blocks; bias 1: uniformly random riffle
    heads = [0] * len(seqs)
    left = [len(s) for s in seqs]
    out: list[str] = []
    total = sum(left)
    while len(out) < total:
        if rng.random() < bias:
            i = int(rng.choice(len(seqs), p=np.array(left) / sum(left)))
        else:
            i = next(i for i, n in enumerate(left) if n)
        out.append(seqs[i][heads[i]])
        heads[i] += 1
        left[i] -= 1
    return out


def gen_raw(seed: int, k: int, num_layers: int, n_target: int, interleave_bias: float = 1.0) -> RawForest:
    if k < 1 or num_layers < 2 or n_target < k or not 0.0 <= interleave_bias <= 1.0:
        raise InvalidParams(
            f"need k >= 1, layers >= 2, n >= k and bias in [0, 1]; got k={k}, "
            f"layers={num_layers}, n={n_target}, bias={interleave_bias}"
        )
    rng = np.random.Generator(np.random.PCG64(seed))
    sizes = 1 + rng.multinomial(n_target - k, [1.0 / k] * k)
    trees, leaf_seqs = [], []
    for i, size in enumerate(sizes):
        t, leaves = _random_tree(rng, i, int(size), num_layers)
        trees.append(t)
        leaf_seqs.append(leaves)
    leaf_order = _interleave(rng, leaf_seqs, interleave_bias)
    return RawForest(num_layers, tuple(trees), tuple(leaf_order))


def gen_instance(
    seed: int, k: int, num_layers: int, n_target: int, interleave_bias: float = 1.0
) -> LayeredForest:
    """Random valid forest with exactly ``n_target`` vertices spread over ``k`` trees."""
    return validate_forest(gen_raw(seed, k, num_layers, n_target, interleave_bias))


def gen_three_layer(
    seed: int, mid_sizes: list[int], max_leaves: int = 3, interleave_bias: float = 1.0
) -> LayeredForest:
    """Forest of ``len(mid_sizes)`` trees rooted on layer 3 with prescribed layer-2 sizes.

    Each layer-2 vertex gets between 1 and ``max_leaves`` leaves.
    """
    if not mid_sizes or min(mid_sizes) < 1 or max_leaves < 1:
        raise InvalidParams(f"bad layer-2 sizes {mid_sizes} or max_leaves={max_leaves}")
    rng = np.random.Generator(np.random.PCG64(seed))
    trees, leaf_seqs = [], []
    for i, size in enumerate(mid_sizes):
        root = f"t{i}r"
        layer = {root: 3}
        edges = []
        leaves = []
        for a in range(size):
            mid = f"t{i}m{a}"
            layer[mid] = 2
            edges.append((mid, root))
            for b in range(int(rng.integers(1, max_leaves + 1))):
                leaf = f"t{i}m{a}l{b}"
                layer[leaf] = 1
                edges.append((leaf, mid))
                leaves.append(leaf)
        trees.append(RawTree(root, tuple(edges), layer))
        leaf_seqs.append(leaves)
    leaf_order = _interleave(rng, leaf_seqs, interleave_bias)
    return validate_forest(RawForest(3, tuple(trees), tuple(leaf_order)))
