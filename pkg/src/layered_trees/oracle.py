"""Exhaustive reference solver.

Enumerates every combination of layer orders that keeps each tree in its
embedding and returns a drawing with the fewest crossings.  Exponential; its
only job is to be obviously correct.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from itertools import combinations, product

from .errors import Infeasible, TooLarge
from .forest import Constraint, Drawing, LayeredForest, derive_layer_orders, normalize_constraints

DEFAULT_MAX_COUNT = 10**7


def enumerate_layer_extensions(chains: Sequence[Sequence[str]]) -> Iterator[tuple[str, ...]]:
    """Yield every interleaving of ``chains`` that keeps each chain's internal order."""
    chains = [tuple(c) for c in chains if c]
    total = sum(len(c) for c in chains)
    heads = [0] * len(chains)
    out: list[str] = []

    def rec() -> Iterator[tuple[str, ...]]:
        if len(out) == total:
            yield tuple(out)
            return
        for i, c in enumerate(chains):
            if heads[i] < len(c):
                out.append(c[heads[i]])
                heads[i] += 1
                yield from rec()
                heads[i] -= 1
                out.pop()

    yield from rec()


def extension_count(sizes: Iterable[int]) -> int:
    sizes = list(sizes)
    count, seen = 1, 0
    for s in sizes:
        seen += s
        count *= math.comb(seen, s)
    return count


@dataclass(frozen=True)
class OracleResult:
    drawing: Drawing
    crossings: int
    drawings_checked: int


def brute_force_min(
    forest: LayeredForest,
    constraints: Iterable[Sequence[str]] = (),
    max_count: int = DEFAULT_MAX_COUNT,
) -> OracleResult:
    """Exact minimum over all embedding-preserving drawings satisfying ``constraints``.

    Raises :class:`TooLarge` when the number of drawings to try exceeds
    ``max_count`` and :class:`Infeasible` when no drawing satisfies the constraints.
    """
    orders = derive_layer_orders(forest)
    cons = normalize_constraints(forest, constraints)
    ell = forest.num_layers

    estimate = 1
    for j in range(2, ell + 1):
        estimate *= extension_count(len(c) for c in orders.chains(j))
    if estimate > max_count:
        raise TooLarge(estimate, max_count)

    leaf_pos = {v: x for x, v in enumerate(forest.leaf_order)}
    if not all(leaf_pos[x] < leaf_pos[y] for x, y in cons if forest.layer(x) == 1):
        raise Infeasible("constraints contradict the leaf order")

    candidates: list[list[tuple[str, ...]]] = [[forest.leaf_order]]
    for j in range(2, ell + 1):
        layer_cons = [c for c in cons if forest.layer(c[0]) == j]
        exts = [e for e in enumerate_layer_extensions(orders.chains(j)) if _respects(e, layer_cons)]
        if not exts:
            raise Infeasible(f"no order of layer {j} satisfies the constraints")
        candidates.append(exts)

    strips = [forest.strip_edges(j) for j in range(1, ell)]
    pairs = [
        [(e, f) for e, f in combinations(s, 2) if e[0] != f[0] and e[1] != f[1]] for s in strips
    ]
    # crossings of strip j depend only on the orders of layers j and j + 1
    memo: dict[tuple[int, int, int], int] = {}
    idx_maps = [[{v: x for x, v in enumerate(e)} for e in exts] for exts in candidates]

    def strip_count(j: int, a: int, b: int) -> int:
        key = (j, a, b)
        got = memo.get(key)
        if got is None:
            lo, hi = idx_maps[j][a], idx_maps[j + 1][b]
            got = sum(
                (lo[u1] < lo[u2]) != (hi[v1] < hi[v2]) for (u1, v1), (u2, v2) in pairs[j]
            )
            memo[key] = got
        return got

    best, best_choice, checked = math.inf, None, 0
    for choice in product(*(range(len(c)) for c in candidates)):
        checked += 1
        total = sum(strip_count(j, choice[j], choice[j + 1]) for j in range(ell - 1))
        if total < best:
            best, best_choice = total, choice
    assert best_choice is not None
    drawing = Drawing(tuple(candidates[j][c] for j, c in enumerate(best_choice)))
    return OracleResult(drawing, int(best), checked)


def _respects(order: Sequence[str], cons: Sequence[Constraint]) -> bool:
    if not cons:
        return True
    idx = {v: x for x, v in enumerate(order)}
    return all(idx[x] < idx[y] for x, y in cons)
