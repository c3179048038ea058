"""Flattened, presentation-ready layouts for one canvas.

A layout bundles everything a viewer needs for a single page: the
canvas dimensions, every painting with absolute geometry, the layers
those paintings belong to, and the choices (with current selections)
that influenced the result.

The interchange form of a layout is itself an SCX document holding one
``FlattenedLayout`` node, emitted through the graph serializer. That
makes layout output round-trip through the ordinary parser and keeps
its bytes deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .graph import Graph, serialize
from .model import Canvas, Choice, Constraint, Finding, ForeignNode, Layer
from .resolver import ChoiceSelection, PaintedAnnotation, _paint


@dataclass(frozen=True)
class ChoiceState:
    id: str
    options: tuple[str, ...]
    selected: str


@dataclass(frozen=True)
class FlattenedLayout:
    canvas: str
    width: float
    height: float
    label: str | None
    paintings: tuple[PaintedAnnotation, ...]
    layers: tuple[tuple[str, str | None], ...]  # (layer id, label)
    choices: tuple[ChoiceState, ...]


def build_layout(
    graph: Graph,
    canvas_id: str,
    selection: ChoiceSelection | None = None,
    findings: list[Finding] | None = None,
) -> FlattenedLayout:
    """Paint a canvas and collect the layers and choices involved."""
    selection = dict(selection or {})
    paintings, choice_ids = _paint(graph, canvas_id, selection, findings)
    canvas = graph.get(canvas_id)
    assert isinstance(canvas, Canvas)
    layer_ids = sorted({p.layer for p in paintings if p.layer is not None})
    layers = []
    for layer_id in layer_ids:
        node = graph.get(layer_id)
        layers.append((layer_id, node.label if isinstance(node, Layer) else None))
    choices = []
    for choice_id in choice_ids:
        choice = graph.get(choice_id)
        if isinstance(choice, Choice) and choice.options:
            selected = selection.get(choice_id, choice.options[0])
            choices.append(ChoiceState(choice_id, choice.options, selected))
    return FlattenedLayout(
        canvas=canvas.id,
        width=canvas.width,
        height=canvas.height,
        label=canvas.label,
        paintings=tuple(paintings),
        layers=tuple(layers),
        choices=tuple(choices),
    )


def _constraint_props(constraint: Constraint) -> dict:
    props: dict = {"id": constraint.id, "form": constraint.form}
    for key, value in (
        ("unit", constraint.unit), ("x", constraint.x), ("y", constraint.y),
        ("w", constraint.w), ("h", constraint.h), ("path", constraint.path),
        ("offset", constraint.offset), ("length", constraint.length),
    ):
        if value is not None:
            props[key] = value
    return props


def _body_text(graph: Graph, body: str) -> str | None:
    node = graph.get(body)
    if isinstance(node, ForeignNode) and isinstance(node.properties.get("chars"), str):
        return node.properties["chars"]
    return None


def _painting_props(graph: Graph, painting: PaintedAnnotation) -> dict:
    annotation = graph.get(painting.annotation)
    props: dict = {
        "annotation": painting.annotation,
        "kind": getattr(annotation, "kind", "generic"),
        "layer": painting.layer,
        "body": painting.body,
    }
    text = _body_text(graph, painting.body)
    if text is not None:
        props["bodyText"] = text
    if painting.body_segment is not None:
        props["bodySegment"] = _constraint_props(painting.body_segment)
    props["region"] = [[v.x, v.y] for v in painting.region.vertices]
    props["rotation"] = painting.rotation
    props["zOrder"] = painting.z_order
    return props


def layout_node(layout: FlattenedLayout, graph: Graph) -> ForeignNode:
    properties: dict = {
        "canvas": layout.canvas,
        "width": layout.width,
        "height": layout.height,
    }
    if layout.label is not None:
        properties["label"] = layout.label
    properties["paintings"] = [_painting_props(graph, p) for p in layout.paintings]
    properties["layers"] = [{"id": layer_id, "label": label} for layer_id, label in layout.layers]
    properties["choices"] = [
        {"id": c.id, "options": list(c.options), "selected": c.selected} for c in layout.choices
    ]
    return ForeignNode(id=layout.canvas + "#layout", type="FlattenedLayout", properties=properties)


def layout_scx(layout: FlattenedLayout, graph: Graph) -> bytes:
    """The layout as a one-node SCX document (canonical bytes)."""
    node = layout_node(layout, graph)
    doc = Graph(nodes={node.id: node})
    return serialize(doc)


def layout_svg(layout: FlattenedLayout, graph: Graph) -> str:
    """An SVG rendering of the layout, one group per painting.

    Region outlines are drawn for every painting; text bodies that carry
    inline characters are drawn at the region's first vertex, rotated by
    the painting's residual rotation.
    """
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{layout.width}" height="{layout.height}" '
        f'viewBox="0 0 {layout.width} {layout.height}">',
        f'  <rect x="0" y="0" width="{layout.width}" height="{layout.height}" '
        'fill="white" stroke="black"/>',
    ]
    for painting in layout.paintings:
        points = " ".join(f"{v.x},{v.y}" for v in painting.region.vertices)
        lines.append(f"  <g data-annotation={quoteattr(painting.annotation)}>")
        lines.append(f'    <polygon points="{points}" fill="none" stroke="black"/>')
        text = _body_text(graph, painting.body)
        if text is not None:
            anchor = painting.region.vertices[0]
            transform = ""
            if painting.rotation:
                transform = f' transform="rotate({painting.rotation} {anchor.x} {anchor.y})"'
            lines.append(
                f'    <text x="{anchor.x}" y="{anchor.y}" dy="12"{transform}>{escape(text)}</text>'
            )
        lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
