"""Command-line driver: ``layered-trees {solve,oracle,gen,check}``."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from .errors import ForestError, Infeasible, SizeLimitExceeded
from .forest import (
    LayeredForest,
    build_forest,
    count_crossings,
    embedding_drawing,
    normalize_constraints,
    satisfies,
)
from .generator import gen_raw
from .grid import DEFAULT_MAX_CELLS, solve_three_layer
from .io import Instance, dump_instance, emit_drawing, parse_drawing, parse_instance
from .oracle import brute_force_min
from .two_tree import solve_two_trees

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_TOO_LARGE = 4

OPEN_CASE = (
    "no exact solver for {k} trees on {layers} layers: polynomial algorithms exist for "
    "2 trees (dp2) or at most 3 layers (grid3); k >= 3 trees on >= 4 layers is an open case. "
    "Use `oracle` for small instances."
)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _root_constraints(root_order: Sequence[str]) -> list[tuple[str, str]]:
    return list(zip(root_order, root_order[1:]))


def choose_algorithm(forest: LayeredForest, requested: str, has_constraints: bool, fixed_roots: bool) -> str:
    if requested != "auto":
        return requested
    if forest.k == 1:
        return "embedding"
    if (has_constraints or fixed_roots) and forest.num_layers <= 3:
        return "grid3"
    if has_constraints or fixed_roots:
        raise ForestError("constraints and fixed root orders are only supported on at most 3 layers")
    if forest.k == 2:
        return "dp2"
    if forest.num_layers <= 3:
        return "grid3"
    raise ForestError(OPEN_CASE.format(k=forest.k, layers=forest.num_layers))


def _solve(args: argparse.Namespace) -> int:
    inst = parse_instance(_read(args.instance))
    forest = build_forest(inst.forest)
    root_order = inst.root_order
    if args.fixed_root_order:
        root_order = tuple(v for v in args.fixed_root_order.split(",") if v)
    cons = normalize_constraints(forest, inst.constraints)
    algo = choose_algorithm(forest, args.algorithm, bool(cons), root_order is not None)
    log.info("solving %d trees on %d layers with %s", forest.k, forest.num_layers, algo)

    if algo == "dp2":
        if cons or root_order is not None:
            raise ForestError("dp2 supports neither constraints nor a fixed root order")
        sol = solve_two_trees(forest)
        drawing, crossings = sol.drawing, sol.crossings
    elif algo == "grid3":
        sol3 = solve_three_layer(forest, cons, root_order, max_cells=args.max_grid_cells)
        drawing, crossings = sol3.drawing, sol3.crossings
    elif algo == "oracle":
        extra = _root_constraints(root_order) if root_order is not None else []
        res = brute_force_min(forest, list(cons) + extra)
        drawing, crossings = res.drawing, res.crossings
    elif algo == "embedding":
        drawing = embedding_drawing(forest)
        if not satisfies(drawing, cons):
            raise Infeasible("a single tree has exactly one drawing and it violates the constraints")
        crossings = 0
    else:
        raise ForestError(f"unknown algorithm {algo!r}")
    _write(emit_drawing(forest, drawing, crossings, args.format, algo), args.out)
    return EXIT_OK


def _oracle(args: argparse.Namespace) -> int:
    args.algorithm = "oracle"
    return _solve(args)


def _gen(args: argparse.Namespace) -> int:
    raw = gen_raw(args.seed, args.k, args.layers, args.n, args.bias)
    _write(dump_instance(Instance(raw)), args.out)
    return EXIT_OK


def _check(args: argparse.Namespace) -> int:
    inst = parse_instance(_read(args.instance))
    forest = build_forest(inst.forest)
    drawing = parse_drawing(_read(args.drawing))
    crossings = count_crossings(forest, drawing)
    cons = normalize_constraints(forest, inst.constraints)
    if not satisfies(drawing, cons):
        raise Infeasible("drawing violates the instance constraints")
    _write(emit_drawing(forest, drawing, crossings, args.format, "check"), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="layered-trees", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("json", "svg"), default="json")
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("solve", help="minimum-crossing drawing of an instance")
    p.add_argument("instance", help="instance JSON file, or - for stdin")
    p.add_argument("--algorithm", choices=("auto", "dp2", "grid3", "oracle"), default="auto")
    p.add_argument("--max-grid-cells", type=int, default=DEFAULT_MAX_CELLS)
    p.add_argument("--fixed-root-order", metavar="IDS", help="comma-separated layer-3 order to keep fixed")
    output_flags(p)
    p.set_defaults(func=_solve)

    p = sub.add_parser("oracle", help="brute-force minimum (small instances only)")
    p.add_argument("instance")
    p.add_argument("--fixed-root-order", metavar="IDS")
    output_flags(p)
    p.set_defaults(func=_oracle, max_grid_cells=DEFAULT_MAX_CELLS)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-k", type=int, default=2, help="number of trees")
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("-n", type=int, default=12, help="total number of vertices")
    p.add_argument("--bias", type=float, default=1.0, help="0 = leaf blocks, 1 = uniform riffle")
    p.add_argument("--out")
    p.set_defaults(func=_gen)

    p = sub.add_parser("check", help="validate a drawing and count its crossings")
    p.add_argument("instance")
    p.add_argument("drawing", help="drawing JSON as written by `solve`")
    output_flags(p)
    p.set_defaults(func=_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ForestError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except Infeasible as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SizeLimitExceeded as e:
        print(f"too large: {e}", file=sys.stderr)
        return EXIT_TOO_LARGE


if __name__ == "__main__":
    sys.exit(main())
