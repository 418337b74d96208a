"""Exception hierarchy shared by every solver and the CLI."""

from __future__ import annotations


class ForestError(ValueError):
    """The input forest (or something derived from it) is malformed."""


class NonContiguousLeaves(ForestError):
    def __init__(self, tree: int, vertex: str):
        super().__init__(
            f"tree {tree}: descendant leaves of {vertex!r} are not contiguous in the leaf order"
        )
        self.tree = tree
        self.vertex = vertex


class LongEdge(ForestError):
    def __init__(self, child: str, parent: str):
        super().__init__(f"edge ({child!r}, {parent!r}) spans more than one layer; subdivide first")
        self.child = child
        self.parent = parent


class MissingLeafInOrder(ForestError):
    def __init__(self, leaf: str):
        super().__init__(f"leaf {leaf!r} is missing from the leaf order")
        self.leaf = leaf


class LeafNotOnLayerOne(ForestError):
    def __init__(self, vertex: str, layer: int):
        super().__init__(f"leaf {vertex!r} sits on layer {layer}, leaves must be on layer 1")
        self.vertex = vertex
        self.layer = layer


class CycleDetected(ForestError):
    def __init__(self, vertex: str):
        super().__init__(f"parent chain starting at {vertex!r} runs into a cycle")
        self.vertex = vertex


class InvalidDrawing(ForestError):
    pass


class NotTwoTrees(ForestError):
    pass


class NotThreeLayers(ForestError):
    pass


class OutOfGrid(ForestError):
    pass


class InvalidParams(ForestError):
    pass


class SchemaError(ForestError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class Infeasible(Exception):
    """No drawing satisfies the given ordering constraints."""


class SizeLimitExceeded(Exception):
    """An exact solver refused an instance that exceeds its size guard."""

    def __init__(self, required: int, limit: int, what: str):
        super().__init__(f"{what} needs {required} entries, limit is {limit}")
        self.required = required
        self.limit = limit


class TooLarge(SizeLimitExceeded):
    def __init__(self, required: int, limit: int):
        super().__init__(required, limit, "brute-force enumeration")


class GridTooLarge(SizeLimitExceeded):
    def __init__(self, required: int, limit: int):
        super().__init__(required, limit, "grid shortest-path table")


class TableNotFilled(LookupError):
    pass
