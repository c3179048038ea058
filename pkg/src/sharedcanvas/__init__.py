"""Toolkit for distributed manuscript-layout graphs.

Parse, merge, and validate description graphs; resolve annotations onto
canvases through zones, choices, and coordinate transforms; query
alignment between layers; and serve flattened layouts to a viewer.
"""

from .geometry import (
    Box,
    GeometryError,
    NotSpatialError,
    Point,
    Polygon,
    SvgPathError,
    Transform,
    apply_transform,
    intersection_area,
    inverse_map_box,
    parse_svg_path,
    polygon,
    polygon_area,
    rect,
    resolve_constraint,
)
from .graph import (
    FetchError,
    FetchPlan,
    Graph,
    MergeConflictError,
    ScxParseError,
    fetch_closure,
    merge,
    parse_manifest,
    serialize,
)
from .layout import FlattenedLayout, build_layout, layout_scx, layout_svg
from .model import (
    Annotation,
    AnnotationList,
    Canvas,
    Choice,
    Constraint,
    Finding,
    ForeignNode,
    Layer,
    Manifest,
    Range,
    Ref,
    SemanticStatement,
    Sequence,
    Zone,
)
from .resolver import (
    AlignmentHit,
    PaintedAnnotation,
    ResolverError,
    SelectionError,
    TextRangeError,
    UnknownNodeError,
    ZoneCycleError,
    align,
    canvas_order,
    expand_template,
    layer_of,
    paint,
    range_canvases,
    semantic_statements,
    text_segment,
)
from .validation import validate_graph, validate_node

__version__ = "0.1.0"

__all__ = [
    "AlignmentHit",
    "Annotation",
    "AnnotationList",
    "Box",
    "Canvas",
    "Choice",
    "Constraint",
    "FetchError",
    "FetchPlan",
    "Finding",
    "FlattenedLayout",
    "ForeignNode",
    "GeometryError",
    "Graph",
    "Layer",
    "Manifest",
    "MergeConflictError",
    "NotSpatialError",
    "PaintedAnnotation",
    "Point",
    "Polygon",
    "Range",
    "Ref",
    "ResolverError",
    "ScxParseError",
    "SelectionError",
    "SemanticStatement",
    "Sequence",
    "SvgPathError",
    "TextRangeError",
    "Transform",
    "UnknownNodeError",
    "Zone",
    "ZoneCycleError",
    "align",
    "apply_transform",
    "build_layout",
    "canvas_order",
    "expand_template",
    "fetch_closure",
    "intersection_area",
    "inverse_map_box",
    "layer_of",
    "layout_scx",
    "layout_svg",
    "merge",
    "paint",
    "parse_manifest",
    "parse_svg_path",
    "polygon",
    "polygon_area",
    "range_canvases",
    "rect",
    "resolve_constraint",
    "semantic_statements",
    "serialize",
    "text_segment",
    "validate_graph",
    "validate_node",
]
