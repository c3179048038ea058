"""Node-level rule checking.

``validate_node`` reports violations instead of raising: the model is
distributed, so a description is routinely examined while half of it
lives elsewhere. References that do not resolve inside the merged graph
are *warnings* (the missing half may simply not be loaded); structural
violations of a node's own invariants are *errors*. A strict caller can
promote warnings, the library does not.
"""

from __future__ import annotations

from .geometry import GeometryError, parse_svg_path
from .graph import Graph
from .model import (
    ANNOTATION_KINDS,
    Annotation,
    AnnotationList,
    BOX_UNITS,
    Canvas,
    Choice,
    CHOICE_KINDS,
    Constraint,
    CONSTRAINT_FORMS,
    Finding,
    Layer,
    LIST_KINDS,
    Manifest,
    Range,
    Ref,
    Sequence,
    Zone,
    is_uri,
)


def _error(code: str, node: str, message: str) -> Finding:
    return Finding("error", code, node, message)


def _warning(code: str, node: str, message: str) -> Finding:
    return Finding("warning", code, node, message)


def validate_node(graph: Graph, node_id: str) -> list[Finding]:
    """All invariant violations for one node.

    Unresolvable references yield ``W_EXTERNAL_REF`` warnings; violations
    of the node's own structure yield errors. An id absent from the graph
    yields a single ``E_UNKNOWN_NODE`` error.
    """
    node = graph.get(node_id)
    if node is None:
        return [_error("E_UNKNOWN_NODE", node_id, "no node with this id in the graph")]
    findings: list[Finding] = []
    if not is_uri(node.id):
        findings.append(_error("E_BAD_URI", node.id, "node id is not an absolute URI"))

    if isinstance(node, Canvas):
        _check_dimensions(findings, node.id, node.height, node.width)
    elif isinstance(node, Zone):
        _check_dimensions(findings, node.id, node.height, node.width)
        if not (0 <= node.reading_angle < 360):
            findings.append(
                _error("E_ANGLE_RANGE", node.id, f"readingAngle {node.reading_angle} outside [0, 360)")
            )
    elif isinstance(node, Annotation):
        _check_annotation(graph, findings, node)
    elif isinstance(node, Constraint):
        _check_constraint(findings, node)
    elif isinstance(node, Choice):
        _check_choice(graph, findings, node)
    elif isinstance(node, Sequence):
        _check_sequence(graph, findings, node)
    elif isinstance(node, Range):
        _check_range(graph, findings, node)
    elif isinstance(node, AnnotationList):
        _check_annotation_list(graph, findings, node)
    elif isinstance(node, Layer):
        _check_layer(graph, findings, node)
    elif isinstance(node, Manifest):
        _check_manifest(graph, findings, node)
    # foreign nodes carry no known invariants
    return findings


def validate_graph(graph: Graph) -> list[Finding]:
    """Closure warnings plus per-node findings, in id order."""
    findings = list(graph.warnings)
    for node_id in sorted(graph.nodes):
        findings.extend(validate_node(graph, node_id))
    return findings


def _check_dimensions(findings: list[Finding], node_id: str, height: float, width: float) -> None:
    bad = [name for name, v in (("height", height), ("width", width)) if not v > 0]
    if bad:
        findings.append(
            _error("E_NONPOSITIVE_DIMENSION", node_id, f"{' and '.join(bad)} must be positive")
        )


def _check_uri_ref(graph: Graph, findings: list[Finding], node_id: str, uri: str, role: str) -> bool:
    """Common URI checks; returns True when the target resolves locally."""
    if not is_uri(uri):
        findings.append(_error("E_BAD_URI", node_id, f"{role} {uri!r} is not an absolute URI"))
        return False
    if uri not in graph.nodes:
        findings.append(
            _warning("W_EXTERNAL_REF", node_id, f"{role} {uri} does not resolve in the merged graph")
        )
        return False
    return True


def _check_ref(graph: Graph, findings: list[Finding], node_id: str, ref: Ref, role: str) -> None:
    if ref.choice:
        if _check_uri_ref(graph, findings, node_id, ref.resource, f"{role} choice"):
            if not isinstance(graph.get(ref.resource), Choice):
                findings.append(
                    _error("E_REF_TYPE", node_id, f"{role} choice {ref.resource} is not a Choice node")
                )
        return
    _check_uri_ref(graph, findings, node_id, ref.resource, f"{role} resource")
    if ref.constraint is not None:
        if _check_uri_ref(graph, findings, node_id, ref.constraint, f"{role} constraint"):
            if not isinstance(graph.get(ref.constraint), Constraint):
                findings.append(
                    _error("E_REF_TYPE", node_id, f"{role} constraint {ref.constraint} is not a Constraint node")
                )
        if ref.id is None or ref.id == ref.resource:
            findings.append(
                _error(
                    "E_CONSTRAINED_ID",
                    node_id,
                    f"constrained {role} must carry its own id distinct from {ref.resource}",
                )
            )
        elif not is_uri(ref.id):
            findings.append(_error("E_BAD_URI", node_id, f"{role} segment id {ref.id!r} is not an absolute URI"))


def _check_annotation(graph: Graph, findings: list[Finding], node: Annotation) -> None:
    if node.kind not in ANNOTATION_KINDS:
        findings.append(_error("E_BAD_KIND", node.id, f"unknown annotation kind {node.kind!r}"))
    if node.body is None:
        findings.append(_error("E_MISSING_BODY", node.id, "annotation has no body"))
    else:
        _check_ref(graph, findings, node.id, node.body, "body")
    if not node.targets:
        findings.append(_error("E_NO_TARGETS", node.id, "annotation needs at least one target"))
    for ref in node.targets:
        _check_ref(graph, findings, node.id, ref, "target")
    if node.kind == "zone" and node.body is not None:
        body_node = graph.get(node.body.resource)
        if body_node is not None:
            if node.body.choice:
                if isinstance(body_node, Choice) and body_node.choice_kind != "zone":
                    findings.append(
                        _error("E_ZONE_BODY", node.id, "zone annotation body choice is not a zone choice")
                    )
            elif not isinstance(body_node, Zone):
                findings.append(
                    _error("E_ZONE_BODY", node.id, f"zone annotation body {node.body.resource} is not a Zone")
                )


def _check_constraint(findings: list[Finding], node: Constraint) -> None:
    if node.form not in CONSTRAINT_FORMS:
        findings.append(_error("E_CONSTRAINT_FORM", node.id, f"unknown constraint form {node.form!r}"))
        return
    if node.form == "box":
        if node.unit not in BOX_UNITS or None in (node.x, node.y, node.w, node.h):
            findings.append(_error("E_CONSTRAINT_FORM", node.id, "box constraint needs unit, x, y, w, h"))
            return
        if not (node.w > 0 and node.h > 0):
            findings.append(_error("E_NONPOSITIVE_DIMENSION", node.id, "box w and h must be positive"))
        if node.unit == "percent":
            over = []
            if not (0 <= node.x <= 100 and 0 <= node.y <= 100):
                over.append(f"origin ({node.x}, {node.y}) outside [0, 100]")
            if node.x + node.w > 100:
                over.append(f"x+w = {node.x + node.w} > 100")
            if node.y + node.h > 100:
                over.append(f"y+h = {node.y + node.h} > 100")
            if over:
                findings.append(_error("E_PERCENT_OVERFLOW", node.id, "; ".join(over)))
        elif node.x < 0 or node.y < 0:
            findings.append(_error("E_NEGATIVE_ORIGIN", node.id, "pixel box origin must be non-negative"))
    elif node.form == "svg-path":
        if node.path is None:
            findings.append(_error("E_CONSTRAINT_FORM", node.id, "svg-path constraint needs a path"))
            return
        try:
            parse_svg_path(node.path)
        except GeometryError as exc:
            findings.append(_error(exc.code, node.id, str(exc)))
    else:  # text-offset
        if node.offset is None or node.offset < 0 or node.length is None or node.length < 1:
            findings.append(
                _error("E_TEXT_SPAN", node.id, "text-offset constraint needs offset >= 0 and length >= 1")
            )


def _check_choice(graph: Graph, findings: list[Finding], node: Choice) -> None:
    if node.choice_kind not in CHOICE_KINDS:
        findings.append(_error("E_BAD_KIND", node.id, f"unknown choice kind {node.choice_kind!r}"))
    if not node.options:
        findings.append(_error("E_EMPTY_OPTIONS", node.id, "choice needs at least one option"))
    for option in node.options:
        if _check_uri_ref(graph, findings, node.id, option, "option"):
            if node.choice_kind == "zone" and not isinstance(graph.get(option), Zone):
                findings.append(
                    _error("E_CHOICE_ZONE_OPTION", node.id, f"zone choice option {option} is not a Zone")
                )


def _check_sequence(graph: Graph, findings: list[Finding], node: Sequence) -> None:
    duplicates = sorted({c for c in node.canvases if node.canvases.count(c) > 1})
    if duplicates:
        findings.append(
            _error("E_DUPLICATE_CANVAS", node.id, f"canvases listed more than once: {', '.join(duplicates)}")
        )
    for canvas in node.canvases:
        if _check_uri_ref(graph, findings, node.id, canvas, "canvas"):
            if not isinstance(graph.get(canvas), Canvas):
                findings.append(_error("E_REF_TYPE", node.id, f"sequence entry {canvas} is not a Canvas"))


def _check_range(graph: Graph, findings: list[Finding], node: Range) -> None:
    for canvas in node.canvases:
        if _check_uri_ref(graph, findings, node.id, canvas, "canvas"):
            if not isinstance(graph.get(canvas), Canvas):
                findings.append(_error("E_REF_TYPE", node.id, f"range entry {canvas} is not a Canvas"))
    if node.sequence is None:
        findings.append(_error("E_MISSING_FIELD", node.id, "range has no sequence"))
        return
    if not _check_uri_ref(graph, findings, node.id, node.sequence, "sequence"):
        return
    seq = graph.get(node.sequence)
    if not isinstance(seq, Sequence):
        findings.append(_error("E_REF_TYPE", node.id, f"range sequence {node.sequence} is not a Sequence"))
        return
    missing = [c for c in node.canvases if c not in seq.canvases]
    if missing:
        findings.append(
            _error(
                "E_RANGE_NOT_IN_SEQUENCE",
                node.id,
                f"canvases not in sequence {node.sequence}: {', '.join(missing)}",
            )
        )
    positions = [seq.canvases.index(c) for c in node.canvases if c in seq.canvases]
    if any(b <= a for a, b in zip(positions, positions[1:])):
        findings.append(
            _error("E_RANGE_ORDER", node.id, "range canvases do not preserve the sequence order")
        )


def _check_annotation_list(graph: Graph, findings: list[Finding], node: AnnotationList) -> None:
    if node.list_kind not in LIST_KINDS:
        findings.append(_error("E_BAD_KIND", node.id, f"unknown list kind {node.list_kind!r}"))
    for member in node.annotations:
        if not _check_uri_ref(graph, findings, node.id, member, "annotation"):
            continue
        annotation = graph.get(member)
        if not isinstance(annotation, Annotation):
            findings.append(_error("E_REF_TYPE", node.id, f"list entry {member} is not an Annotation"))
        elif node.list_kind != "mixed" and annotation.kind != node.list_kind:
            findings.append(
                _error(
                    "E_LIST_KIND_MISMATCH",
                    node.id,
                    f"{member} has kind {annotation.kind!r}, list expects {node.list_kind!r}",
                )
            )


def _check_layer(graph: Graph, findings: list[Finding], node: Layer) -> None:
    if not node.members:
        findings.append(_error("E_EMPTY_LAYER", node.id, "layer needs at least one member"))
    for member in node.members:
        if _check_uri_ref(graph, findings, node.id, member, "member"):
            if not isinstance(graph.get(member), (Annotation, AnnotationList)):
                findings.append(
                    _error(
                        "E_LAYER_MEMBER_TYPE",
                        node.id,
                        f"member {member} is neither an Annotation nor an AnnotationList",
                    )
                )


def _check_manifest(graph: Graph, findings: list[Finding], node: Manifest) -> None:
    if not node.sequences:
        findings.append(_error("E_NO_SEQUENCES", node.id, "manifest needs at least one sequence"))
    for seq in node.sequences:
        if _check_uri_ref(graph, findings, node.id, seq, "sequence"):
            if not isinstance(graph.get(seq), Sequence):
                findings.append(_error("E_REF_TYPE", node.id, f"manifest sequence {seq} is not a Sequence"))
    for entry in node.discovery:
        if _check_uri_ref(graph, findings, node.id, entry, "discovery entry"):
            if not isinstance(graph.get(entry), (AnnotationList, Layer)):
                findings.append(
                    _error(
                        "E_REF_TYPE",
                        node.id,
                        f"discovery entry {entry} is neither an AnnotationList nor a Layer",
                    )
                )
