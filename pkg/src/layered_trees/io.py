"""JSON instance documents, JSON/SVG drawing output."""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from jsonschema import Draft202012Validator

from .errors import SchemaError
from .forest import Constraint, Drawing, LayeredForest, RawForest, RawTree

_ID = {"type": "string", "minLength": 1}
_ID_LIST = {"type": "array", "items": _ID}
_PAIR = {"type": "array", "items": _ID, "minItems": 2, "maxItems": 2}

INSTANCE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["layers", "trees", "leaf_order"],
    "properties": {
        "layers": {"type": "integer", "minimum": 2},
        "trees": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["root", "edges", "layer"],
                "properties": {
                    "root": _ID,
                    "edges": {"type": "array", "items": _PAIR},
                    "layer": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 1}},
                },
            },
        },
        "leaf_order": _ID_LIST,
        "root_order": _ID_LIST,
        "constraints": {"type": "array", "items": _PAIR},
    },
}

DRAWING_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["layers"],
    "properties": {
        "layers": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["layer", "order"],
                "properties": {"layer": {"type": "integer", "minimum": 1}, "order": _ID_LIST},
            },
        },
    },
}


@dataclass(frozen=True)
class Instance:
    forest: RawForest
    root_order: tuple[str, ...] | None = None
    constraints: tuple[Constraint, ...] = ()


def _path(error_path: Sequence[Any]) -> str:
    out = "$"
    for part in error_path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def _load(text: str, schema: dict[str, Any]) -> Any:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("$", f"invalid JSON: {e}") from None
    errors = sorted(Draft202012Validator(schema).iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        raise SchemaError(_path(errors[0].absolute_path), errors[0].message)
    return doc


def parse_instance(text: str) -> Instance:
    doc = _load(text, INSTANCE_SCHEMA)
    num_layers = doc["layers"]
    trees = []
    for i, t in enumerate(doc["trees"]):
        for v, j in t["layer"].items():
            if j > num_layers:
                raise SchemaError(_path(["trees", i, "layer", v]), f"layer {j} exceeds layers={num_layers}")
        trees.append(RawTree(t["root"], tuple((c, p) for c, p in t["edges"]), dict(t["layer"])))
    root_order = tuple(doc["root_order"]) if "root_order" in doc else None
    constraints = tuple((x, y) for x, y in doc.get("constraints", []))
    return Instance(RawForest(num_layers, tuple(trees), tuple(doc["leaf_order"])), root_order, constraints)


def dump_instance(instance: Instance) -> str:
    f = instance.forest
    doc: dict[str, Any] = {
        "layers": f.num_layers,
        "trees": [
            {"root": t.root, "edges": [list(e) for e in t.edges], "layer": dict(t.layer)} for t in f.trees
        ],
        "leaf_order": list(f.leaf_order),
    }
    if instance.root_order is not None:
        doc["root_order"] = list(instance.root_order)
    if instance.constraints:
        doc["constraints"] = [list(c) for c in instance.constraints]
    return json.dumps(doc, indent=2) + "\n"


def parse_drawing(text: str) -> Drawing:
    doc = _load(text, DRAWING_SCHEMA)
    by_layer: dict[int, tuple[str, ...]] = {}
    for i, entry in enumerate(doc["layers"]):
        if entry["layer"] in by_layer:
            raise SchemaError(_path(["layers", i, "layer"]), f"layer {entry['layer']} listed twice")
        by_layer[entry["layer"]] = tuple(entry["order"])
    top = max(by_layer, default=0)
    if sorted(by_layer) != list(range(1, top + 1)):
        raise SchemaError("$.layers", "layers must be numbered 1..L without gaps")
    return Drawing(tuple(by_layer[j] for j in range(1, top + 1)))


def drawing_json(forest: LayeredForest, drawing: Drawing, crossings: int, algorithm: str) -> str:
    vertices = []
    for j, seq in enumerate(drawing.layers, start=1):
        for x, v in enumerate(seq):
            vertices.append(
                {"id": v, "tree": forest.tree_of[v], "x": x, "y": j, "dummy": forest.vertex(v).dummy}
            )
    doc = {
        "algorithm": algorithm,
        "crossings": crossings,
        "layers": [{"layer": j, "order": list(seq)} for j, seq in enumerate(drawing.layers, start=1)],
        "vertices": vertices,
        "edges": [list(e) for e in forest.edges()],
    }
    return json.dumps(doc, indent=2) + "\n"


X_STEP = 40
Y_STEP = 80
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def drawing_svg(forest: LayeredForest, drawing: Drawing, crossings: int) -> str:
    coords = {v: (x * X_STEP, j * Y_STEP) for v, (x, j) in drawing.coordinates().items()}
    width = max((len(seq) for seq in drawing.layers), default=1) * X_STEP
    height = (len(drawing.layers) + 1) * Y_STEP
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="-20 0 {width} {height}" '
        f'width="{width}" height="{height}">',
        f"<title>{crossings} crossings</title>",
    ]
    for c, p in forest.edges():
        (x1, y1), (x2, y2) = coords[c], coords[p]
        color = _COLORS[forest.tree_of[c] % len(_COLORS)]
        lines.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="1.5"/>')
    for v, (x, y) in coords.items():
        color = _COLORS[forest.tree_of[v] % len(_COLORS)]
        if forest.vertex(v).dummy:
            lines.append(f'<circle cx="{x}" cy="{y}" r="2" fill="{color}"/>')
        else:
            lines.append(f'<circle cx="{x}" cy="{y}" r="6" fill="{color}"/>')
            lines.append(f'<text x="{x}" y="{y - 10}" font-size="10" text-anchor="middle">{_escape(v)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_drawing(
    forest: LayeredForest, drawing: Drawing, crossings: int, fmt: str = "json", algorithm: str = ""
) -> str:
    if fmt == "json":
        return drawing_json(forest, drawing, crossings, algorithm)
    if fmt == "svg":
        return drawing_svg(forest, drawing, crossings)
    raise ValueError(f"unknown format {fmt!r}")
