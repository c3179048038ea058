"""Turns a merged graph into presentation-ready answers.

The central operation is :func:`paint`: given a canvas, produce every
annotation that ends up on it with absolute canvas-frame geometry,
following zones (with their placement and reading rotation) and
resolving choices. Everything else builds on that: geometric alignment
across layers, template expansion, text segment extraction, and
semantic statement lookup.

All operations are pure functions over an immutable graph; concurrent
queries over one graph are safe.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import (
    Box,
    GeometryError,
    Point,
    PointMapper,
    Polygon,
    Transform,
    apply_transform,
    bounding_box,
    intersection_area,
    polygon_area,
    rect,
    resolve_constraint,
)
from .graph import Graph
from .model import (
    Annotation,
    AnnotationList,
    Canvas,
    Choice,
    Constraint,
    Finding,
    ForeignNode,
    Layer,
    Range,
    Ref,
    SemanticStatement,
    Sequence,
    Zone,
)

MAX_ZONE_DEPTH = 8
_MIN_OVERLAP = 1e-9  # guards float noise from rotated regions; real contact areas dwarf it

ChoiceSelection = dict[str, str]


class ResolverError(Exception):
    def __init__(self, message: str, code: str):
        super().__init__(message)
        self.code = code


class UnknownNodeError(ResolverError):
    def __init__(self, message: str):
        super().__init__(message, code="E_UNKNOWN_NODE")


class ZoneCycleError(ResolverError):
    def __init__(self, message: str):
        super().__init__(message, code="E_ZONE_CYCLE")


class SelectionError(ResolverError):
    def __init__(self, message: str):
        super().__init__(message, code="E_BAD_SELECTION")


class TextRangeError(ResolverError):
    def __init__(self, message: str):
        super().__init__(message, code="E_TEXT_RANGE")


@dataclass(frozen=True)
class PaintedAnnotation:
    """One annotation resolved onto a canvas.

    ``region`` is in absolute canvas coordinates. ``rotation`` is the
    residual clockwise rotation the body content needs for display,
    accumulated from the reading angles of the zones it passed through.
    ``z_order`` is the annotation's document order within the id-sorted
    graph, the stacking rule for rendering.
    """

    annotation: str
    canvas: str
    body: str
    region: Polygon
    rotation: float = 0.0
    z_order: int = 0
    layer: str | None = None
    body_segment: Constraint | None = None


@dataclass(frozen=True)
class AlignmentHit:
    annotation: str
    layer: str | None
    overlap_area: float
    overlap_fraction: float


def canvas_order(graph: Graph, sequence: str) -> list[str]:
    """The exact canvas order stored in a sequence."""
    node = graph.get(sequence)
    if not isinstance(node, Sequence):
        raise UnknownNodeError(f"{sequence} is not a Sequence in this graph")
    return list(node.canvases)


def range_canvases(graph: Graph, range_id: str) -> list[str]:
    """The canvases of a range, in stored (sequence-relative) order."""
    node = graph.get(range_id)
    if not isinstance(node, Range):
        raise UnknownNodeError(f"{range_id} is not a Range in this graph")
    return list(node.canvases)


def _layer_membership(graph: Graph) -> dict[str, list[str]]:
    members: dict[str, list[str]] = {}
    for layer in graph.by_type(Layer):
        for member in layer.members:
            node = graph.get(member)
            annotations = node.annotations if isinstance(node, AnnotationList) else (member,)
            for annotation in annotations:
                members.setdefault(annotation, []).append(layer.id)
    return members


def layer_of(graph: Graph, annotation: str, findings: list[Finding] | None = None) -> str | None:
    """The layer containing an annotation, directly or via an annotation list.

    If several layers claim it, the first by id wins and a warning is
    recorded on the findings sink.
    """
    layers = sorted(set(_layer_membership(graph).get(annotation, [])))
    if not layers:
        return None
    if len(layers) > 1 and findings is not None:
        findings.append(
            Finding("warning", "W_MULTI_LAYER", annotation, f"claimed by several layers: {', '.join(layers)}")
        )
    return layers[0]


def _selected_option(choice: Choice, selection: ChoiceSelection) -> str:
    chosen = selection.get(choice.id)
    if chosen is None:
        return choice.options[0]
    return chosen


def _check_selection(graph: Graph, selection: ChoiceSelection) -> None:
    for choice_id, option in selection.items():
        choice = graph.get(choice_id)
        if not isinstance(choice, Choice):
            raise SelectionError(f"{choice_id} is not a Choice in this graph")
        if option not in choice.options:
            raise SelectionError(f"{option} is not an option of {choice_id}")


@dataclass
class _PaintState:
    graph: Graph
    canvas: Canvas
    selection: ChoiceSelection
    findings: list[Finding]
    ranks: dict[str, int]
    layers: dict[str, list[str]]
    by_target: dict[str, list["_TargetEntry"]]
    choices_seen: list[str]
    out: list[PaintedAnnotation]

    def see_choice(self, choice_id: str) -> None:
        if choice_id not in self.choices_seen:
            self.choices_seen.append(choice_id)


@dataclass(frozen=True)
class _TargetEntry:
    annotation: Annotation
    ref: Ref | None  # None: target option not selected, nothing to paint
    via_choice: str | None = None


def _target_index(graph: Graph, selection: ChoiceSelection) -> dict[str, list[_TargetEntry]]:
    """Map surface uri -> target entries, in annotation id order.

    Choice targets are indexed under every option so a surface learns the
    choice exists, but only the selected option carries a paintable ref.
    """
    index: dict[str, list[_TargetEntry]] = {}
    for annotation in graph.by_type(Annotation):
        for ref in annotation.targets:
            if ref.choice:
                choice = graph.get(ref.resource)
                if not isinstance(choice, Choice) or not choice.options:
                    continue
                chosen = _selected_option(choice, selection)
                for option in choice.options:
                    effective = Ref(resource=option) if option == chosen else None
                    index.setdefault(option, []).append(_TargetEntry(annotation, effective, ref.resource))
            else:
                index.setdefault(ref.resource, []).append(_TargetEntry(annotation, ref))
    return index


def _placement_box(state: _PaintState, ref: Ref, surface_w: float, surface_h: float) -> Box | None:
    if ref.constraint is None:
        return Box(0.0, 0.0, surface_w, surface_h)
    constraint = state.graph.get(ref.constraint)
    if not isinstance(constraint, Constraint):
        state.findings.append(
            Finding("error", "E_UNRESOLVED_CONSTRAINT", ref.constraint, "placement constraint does not resolve")
        )
        return None
    try:
        # bounds are only checked on final painted regions, so no sink here
        poly = resolve_constraint(constraint, surface_w, surface_h)
    except GeometryError as exc:
        state.findings.append(Finding("error", exc.code, constraint.id, str(exc)))
        return None
    return bounding_box(poly)


def _region_for(state: _PaintState, ref: Ref, surface_w: float, surface_h: float) -> Polygon | None:
    if ref.constraint is None:
        return rect(0.0, 0.0, surface_w, surface_h)
    constraint = state.graph.get(ref.constraint)
    if not isinstance(constraint, Constraint):
        state.findings.append(
            Finding("error", "E_UNRESOLVED_CONSTRAINT", ref.constraint, "target constraint does not resolve")
        )
        return None
    try:
        return resolve_constraint(constraint, surface_w, surface_h)
    except GeometryError as exc:
        state.findings.append(Finding("error", exc.code, constraint.id, str(exc)))
        return None


def _resolve_body(state: _PaintState, annotation: Annotation) -> Ref | None:
    """The effective body after choice resolution; None paints nothing."""
    body = annotation.body
    if body is None:
        state.findings.append(Finding("error", "E_MISSING_BODY", annotation.id, "annotation has no body"))
        return None
    if not body.choice:
        return body
    choice = state.graph.get(body.resource)
    if not isinstance(choice, Choice) or not choice.options:
        state.findings.append(
            Finding("error", "E_REF_TYPE", annotation.id, f"body choice {body.resource} is not a usable Choice")
        )
        return None
    state.see_choice(choice.id)
    return Ref(resource=_selected_option(choice, state.selection))


def _body_segment(state: _PaintState, annotation: Annotation, body: Ref) -> tuple[Constraint | None, bool]:
    if body.constraint is None:
        return None, True
    constraint = state.graph.get(body.constraint)
    if not isinstance(constraint, Constraint):
        state.findings.append(
            Finding("error", "E_UNRESOLVED_CONSTRAINT", body.constraint, f"body constraint of {annotation.id} does not resolve")
        )
        return None, False
    return constraint, True


def _paint_surface(
    state: _PaintState,
    surface_id: str,
    surface_w: float,
    surface_h: float,
    mapper: PointMapper | None,
    rotation: float,
    depth: int,
) -> None:
    for entry in state.by_target.get(surface_id, []):
        annotation, ref = entry.annotation, entry.ref
        if entry.via_choice is not None:
            state.see_choice(entry.via_choice)
        if ref is None:
            continue
        if annotation.kind == "zone":
            _paint_zone(state, annotation, ref, surface_w, surface_h, mapper, rotation, depth)
            continue
        body = _resolve_body(state, annotation)
        if body is None:
            continue
        segment, usable = _body_segment(state, annotation, body)
        if not usable:
            continue
        region = _region_for(state, ref, surface_w, surface_h)
        if region is None:
            continue
        if mapper is not None:
            region = Polygon(tuple(mapper(v) for v in region.vertices))
        state.out.append(
            PaintedAnnotation(
                annotation=annotation.id,
                canvas=state.canvas.id,
                body=body.resource,
                body_segment=segment,
                region=region,
                rotation=rotation % 360.0,
                z_order=state.ranks[annotation.id],
                layer=min(state.layers.get(annotation.id, []), default=None),
            )
        )


def _paint_zone(
    state: _PaintState,
    annotation: Annotation,
    target: Ref,
    surface_w: float,
    surface_h: float,
    mapper: PointMapper | None,
    rotation: float,
    depth: int,
) -> None:
    body = annotation.body
    if body is None:
        state.findings.append(Finding("error", "E_MISSING_BODY", annotation.id, "zone annotation has no body"))
        return
    zone_id = body.resource
    if body.choice:
        choice = state.graph.get(body.resource)
        if not isinstance(choice, Choice) or not choice.options:
            state.findings.append(
                Finding("error", "E_REF_TYPE", annotation.id, f"zone choice {body.resource} is not a usable Choice")
            )
            return
        state.see_choice(choice.id)
        zone_id = _selected_option(choice, state.selection)
    zone = state.graph.get(zone_id)
    if zone is None:
        state.findings.append(
            Finding("warning", "W_EXTERNAL_REF", annotation.id, f"zone body {zone_id} does not resolve")
        )
        return
    if not isinstance(zone, Zone):
        state.findings.append(
            Finding("error", "E_ZONE_BODY", annotation.id, f"zone annotation body {zone_id} is not a Zone")
        )
        return
    if depth + 1 > MAX_ZONE_DEPTH:
        raise ZoneCycleError(
            f"zone nesting deeper than {MAX_ZONE_DEPTH} at {zone_id}; refusing a likely zone cycle"
        )
    box = _placement_box(state, target, surface_w, surface_h)
    if box is None:
        return
    pivot = Point(box.x, box.y)
    turn = Transform(zone.reading_angle, pivot)

    def to_parent(p: Point, _pivot: Point = pivot, _turn: Transform = turn, _outer: PointMapper | None = mapper) -> Point:
        placed = apply_transform(_turn, Point(_pivot.x + p.x, _pivot.y + p.y))
        return placed if _outer is None else _outer(placed)

    _paint_surface(
        state,
        zone.id,
        zone.width,
        zone.height,
        to_parent,
        rotation + zone.reading_angle,
        depth + 1,
    )


def _paint(
    graph: Graph,
    canvas_id: str,
    selection: ChoiceSelection | None,
    findings: list[Finding] | None,
) -> tuple[list[PaintedAnnotation], list[str]]:
    canvas = graph.get(canvas_id)
    if not isinstance(canvas, Canvas):
        raise UnknownNodeError(f"{canvas_id} is not a Canvas in this graph")
    if not (canvas.width > 0 and canvas.height > 0):
        raise ResolverError(f"canvas {canvas_id} has no usable dimensions", code="E_NONPOSITIVE_DIMENSION")
    selection = dict(selection or {})
    _check_selection(graph, selection)
    sink = findings if findings is not None else []
    choices_seen: list[str] = []
    state = _PaintState(
        graph=graph,
        canvas=canvas,
        selection=selection,
        findings=sink,
        ranks={a.id: i for i, a in enumerate(graph.by_type(Annotation))},
        layers=_layer_membership(graph),
        by_target=_target_index(graph, selection),
        choices_seen=choices_seen,
        out=[],
    )
    _paint_surface(state, canvas.id, canvas.width, canvas.height, None, 0.0, 0)
    state.out.sort(key=lambda p: p.z_order)
    _warn_out_of_bounds(state)
    return state.out, state.choices_seen


def _warn_out_of_bounds(state: _PaintState) -> None:
    eps = 1e-9
    w, h = state.canvas.width, state.canvas.height
    for painting in state.out:
        if any(v.x < -eps or v.y < -eps or v.x > w + eps or v.y > h + eps for v in painting.region.vertices):
            state.findings.append(
                Finding(
                    "warning",
                    "W_OUT_OF_BOUNDS",
                    painting.annotation,
                    f"painted region extends outside canvas {state.canvas.id}",
                )
            )


def paint(
    graph: Graph,
    canvas: str,
    selection: ChoiceSelection | None = None,
    findings: list[Finding] | None = None,
) -> list[PaintedAnnotation]:
    """Resolve every annotation painted onto a canvas.

    Direct targets paint at their constraint region (or the whole
    canvas). Zone-kind annotations place a zone: everything targeting the
    zone is painted recursively, translated to the placement region and
    rotated by the zone's reading angle about the region's top-left
    corner; the angle accumulates into the painting's ``rotation``.
    Choice bodies follow ``selection``, defaulting to the first option.
    Output is ordered by document order (``z_order``).
    """
    paintings, _ = _paint(graph, canvas, selection, findings)
    return paintings


def align(
    graph: Graph,
    canvas: str,
    query_region: Polygon,
    selection: ChoiceSelection | None = None,
    min_fraction: float = 0.0,
    findings: list[Finding] | None = None,
) -> list[AlignmentHit]:
    """Annotations on the canvas that overlap a query region, grouped by layer.

    ``overlap_fraction`` is overlap area divided by the query region's
    area. ``min_fraction`` = 0 means any positive overlap counts. Within
    each layer, hits come in descending fraction order with ties broken
    by annotation id; layerless hits sort last. Geometric overlap on the
    shared canvas makes cross-granularity alignment (a word inside a
    paragraph) automatic.
    """
    query_area = polygon_area(query_region)
    if not query_area > 0:
        raise ValueError("query region must have positive area")
    hits = []
    for painting in paint(graph, canvas, selection, findings):
        overlap = intersection_area(painting.region, query_region)
        if overlap <= _MIN_OVERLAP:
            continue
        fraction = overlap / query_area
        if fraction >= min_fraction:
            hits.append(
                AlignmentHit(
                    annotation=painting.annotation,
                    layer=painting.layer,
                    overlap_area=overlap,
                    overlap_fraction=fraction,
                )
            )
    hits.sort(
        key=lambda h: (
            (0, h.layer) if h.layer is not None else (1, ""),
            -h.overlap_fraction,
            h.annotation,
        )
    )
    return hits


def text_segment(graph: Graph, ref: Ref, full_text: str) -> str:
    """The substring a text-offset constrained reference identifies.

    Offsets count Unicode scalar values.
    """
    if ref.constraint is None:
        raise ResolverError("reference carries no constraint", code="E_NOT_TEXTUAL")
    constraint = graph.get(ref.constraint)
    if not isinstance(constraint, Constraint) or constraint.form != "text-offset":
        raise ResolverError(f"{ref.constraint} is not a text-offset constraint", code="E_NOT_TEXTUAL")
    offset, length = constraint.offset or 0, constraint.length or 0
    if offset < 0 or length < 1 or offset + length > len(full_text):
        raise TextRangeError(
            f"segment [{offset}, {offset + length}) outside text of length {len(full_text)}"
        )
    return full_text[offset : offset + length]


def semantic_statements(graph: Graph, subject: str) -> list[SemanticStatement]:
    """All statements about a subject found in semantic annotation bodies.

    Statement bodies are foreign nodes carrying string ``subject``,
    ``predicate`` and ``object`` properties. Ordered by annotation id.
    """
    statements = []
    for annotation in graph.by_type(Annotation):
        if annotation.kind != "semantic" or annotation.body is None or annotation.body.choice:
            continue
        node = graph.get(annotation.body.resource)
        if not isinstance(node, ForeignNode):
            continue
        props = node.properties
        if not all(isinstance(props.get(k), str) for k in ("subject", "predicate", "object")):
            continue
        if props["subject"] == subject:
            statements.append(
                SemanticStatement(subject=props["subject"], predicate=props["predicate"], object=props["object"])
            )
    return statements


def expand_template(graph: Graph, constraint_id: str) -> list[tuple[str, str, Polygon]]:
    """Every (annotation, canvas, region) using one shared spatial constraint.

    A percent-box constraint written once expands to proportionally
    scaled regions on every canvas it is applied to; re-resolving after
    the constraint node changes updates every expansion consistently.
    """
    constraint = graph.get(constraint_id)
    if not isinstance(constraint, Constraint):
        raise UnknownNodeError(f"{constraint_id} is not a Constraint in this graph")
    if constraint.form not in ("box", "svg-path"):
        raise ResolverError(f"{constraint_id} is not a spatial constraint", code="E_NOT_SPATIAL")
    expansions = []
    for annotation in graph.by_type(Annotation):
        for ref in annotation.targets:
            if ref.choice or ref.constraint != constraint_id:
                continue
            canvas = graph.get(ref.resource)
            if isinstance(canvas, Canvas) and canvas.width > 0 and canvas.height > 0:
                expansions.append(
                    (annotation.id, canvas.id, resolve_constraint(constraint, canvas.width, canvas.height))
                )
    return expansions
