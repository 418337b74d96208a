"""Exact crossing minimization for layered rooted forests with a fixed leaf order."""

from .errors import (
    CycleDetected,
    ForestError,
    GridTooLarge,
    Infeasible,
    InvalidDrawing,
    LeafNotOnLayerOne,
    LongEdge,
    MissingLeafInOrder,
    NonContiguousLeaves,
    NotThreeLayers,
    NotTwoTrees,
    SchemaError,
    TooLarge,
)
from .forest import (
    Drawing,
    LayeredForest,
    RawForest,
    RawTree,
    build_forest,
    count_crossings,
    derive_layer_orders,
    subdivide_long_edges,
    validate_forest,
)
from .generator import gen_instance
from .grid import solve_fixed_orders, solve_three_layer
from .oracle import brute_force_min
from .two_tree import solve_two_trees

__all__ = [
    "CycleDetected",
    "Drawing",
    "ForestError",
    "GridTooLarge",
    "Infeasible",
    "InvalidDrawing",
    "LayeredForest",
    "LeafNotOnLayerOne",
    "LongEdge",
    "MissingLeafInOrder",
    "NonContiguousLeaves",
    "NotThreeLayers",
    "NotTwoTrees",
    "RawForest",
    "RawTree",
    "SchemaError",
    "TooLarge",
    "brute_force_min",
    "build_forest",
    "count_crossings",
    "derive_layer_orders",
    "gen_instance",
    "solve_fixed_orders",
    "solve_three_layer",
    "solve_two_trees",
    "subdivide_long_edges",
    "validate_forest",
]
