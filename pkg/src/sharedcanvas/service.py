"""Read-only HTTP service over a loaded graph snapshot.

The graph is loaded once at startup and never mutated; every response is
a pure function of (snapshot, request), so identical requests produce
byte-identical responses. Writes belong to the repositories that own the
source documents, not to this aggregator.

Endpoints (JSON, UTF-8; ids are percent-encoded full URIs):

    GET /manifest
    GET /sequence/{id}
    GET /canvas/{id}/layout?select=choice=option&...
    GET /canvas/{id}/align?x=&y=&w=&h=&minFraction=
    GET /text/{annotation-id}
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qsl, unquote, urlsplit

from .geometry import GeometryError, rect
from .graph import Graph, serialize
from .layout import build_layout, layout_scx
from .model import Annotation, Canvas, Constraint, ForeignNode, Manifest, Sequence
from .resolver import (
    ChoiceSelection,
    ResolverError,
    SelectionError,
    UnknownNodeError,
    align,
    semantic_statements,
    text_segment,
)


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code


def _json_bytes(payload: object) -> bytes:
    return (json.dumps(payload, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def parse_selection(pairs: list[str]) -> ChoiceSelection:
    """Decode repeated ``select=choice=option`` values."""
    selection: ChoiceSelection = {}
    for pair in pairs:
        choice, sep, option = pair.partition("=")
        if not sep or not choice or not option:
            raise ServiceError(400, "E_BAD_QUERY", f"select needs the form choice=option, got {pair!r}")
        selection[choice] = option
    return selection


def manifest_doc(graph: Graph) -> bytes:
    """The first manifest (by id) with its sequences and discovery nodes."""
    manifests = graph.by_type(Manifest)
    if not manifests:
        raise ServiceError(404, "E_UNKNOWN_NODE", "graph contains no Manifest")
    manifest = manifests[0]
    subset = Graph(nodes={manifest.id: manifest})
    for uri in list(manifest.sequences) + list(manifest.discovery):
        node = graph.get(uri)
        if node is not None:
            subset.nodes[node.id] = node
    return serialize(subset)


def sequence_doc(graph: Graph, sequence_id: str) -> bytes:
    node = graph.get(sequence_id)
    if not isinstance(node, Sequence):
        raise ServiceError(404, "E_UNKNOWN_NODE", f"{sequence_id} is not a Sequence in this graph")
    canvases = []
    for canvas_id in node.canvases:
        canvas = graph.get(canvas_id)
        if isinstance(canvas, Canvas):
            canvases.append(
                {"id": canvas_id, "label": canvas.label, "width": canvas.width, "height": canvas.height}
            )
        else:
            canvases.append({"id": canvas_id, "label": None, "width": None, "height": None})
    return _json_bytes({"sequence": node.id, "label": node.label, "canvases": canvases})


def layout_doc(graph: Graph, canvas_id: str, selection: ChoiceSelection) -> bytes:
    try:
        layout = build_layout(graph, canvas_id, selection)
    except UnknownNodeError as exc:
        raise ServiceError(404, exc.code, str(exc)) from None
    except (SelectionError, ResolverError) as exc:
        raise ServiceError(400, exc.code, str(exc)) from None
    return layout_scx(layout, graph)


def align_doc(
    graph: Graph,
    canvas_id: str,
    x: float,
    y: float,
    w: float,
    h: float,
    min_fraction: float,
    selection: ChoiceSelection,
) -> bytes:
    try:
        region = rect(x, y, w, h)
    except GeometryError as exc:
        raise ServiceError(400, exc.code, str(exc)) from None
    try:
        hits = align(graph, canvas_id, region, selection, min_fraction)
    except UnknownNodeError as exc:
        raise ServiceError(404, exc.code, str(exc)) from None
    except (SelectionError, ResolverError, ValueError) as exc:
        code = getattr(exc, "code", "E_BAD_QUERY")
        raise ServiceError(400, code, str(exc)) from None
    groups: list[dict] = []
    for hit in hits:
        if not groups or groups[-1]["layer"] != hit.layer:
            groups.append({"layer": hit.layer, "hits": []})
        groups[-1]["hits"].append(
            {
                "annotation": hit.annotation,
                "overlapArea": hit.overlap_area,
                "overlapFraction": hit.overlap_fraction,
            }
        )
    return _json_bytes(
        {"canvas": canvas_id, "region": {"x": x, "y": y, "w": w, "h": h}, "groups": groups}
    )


def text_doc(graph: Graph, annotation_id: str) -> bytes:
    """Body text of an annotation plus the identified segments within it.

    Segments are the text-offset constrained targets other annotations
    attach to the same text, each with its extracted span and any
    semantic statements about its id.
    """
    annotation = graph.get(annotation_id)
    if not isinstance(annotation, Annotation):
        raise ServiceError(404, "E_UNKNOWN_NODE", f"{annotation_id} is not an Annotation in this graph")
    if annotation.body is None or annotation.body.choice:
        raise ServiceError(404, "E_UNKNOWN_NODE", f"{annotation_id} has no direct text body")
    body_id = annotation.body.resource
    body = graph.get(body_id)
    chars = None
    if isinstance(body, ForeignNode) and isinstance(body.properties.get("chars"), str):
        chars = body.properties["chars"]
    segments = []
    if chars is not None:
        seen: set[str] = set()
        for other in graph.by_type(Annotation):
            for ref in other.targets:
                if ref.choice or ref.resource != body_id or ref.constraint is None or ref.id is None:
                    continue
                constraint = graph.get(ref.constraint)
                if not isinstance(constraint, Constraint) or constraint.form != "text-offset":
                    continue
                if ref.id in seen:
                    continue
                seen.add(ref.id)
                try:
                    span = text_segment(graph, ref, chars)
                except ResolverError:
                    continue
                segments.append(
                    {
                        "subject": ref.id,
                        "offset": constraint.offset,
                        "length": constraint.length,
                        "text": span,
                        "statements": [
                            {"subject": s.subject, "predicate": s.predicate, "object": s.object}
                            for s in semantic_statements(graph, ref.id)
                        ],
                    }
                )
        segments.sort(key=lambda s: (s["offset"], s["subject"]))
    return _json_bytes({"annotation": annotation_id, "body": body_id, "text": chars, "segments": segments})


def _float_param(params: dict[str, str], name: str) -> float:
    if name not in params:
        raise ServiceError(400, "E_BAD_QUERY", f"missing query parameter {name!r}")
    try:
        return float(params[name])
    except ValueError:
        raise ServiceError(400, "E_BAD_QUERY", f"query parameter {name!r} must be a number") from None


def respond(graph: Graph, path: str, query: str) -> tuple[int, bytes]:
    """Route one GET request; returns (status, body bytes)."""
    segments = [unquote(s) for s in path.split("/")[1:]]
    pairs = parse_qsl(query, keep_blank_values=True)
    params = dict(pairs)
    selects = [v for k, v in pairs if k == "select"]
    try:
        if segments == ["manifest"]:
            return 200, manifest_doc(graph)
        if len(segments) == 2 and segments[0] == "sequence":
            return 200, sequence_doc(graph, segments[1])
        if len(segments) == 3 and segments[0] == "canvas" and segments[2] == "layout":
            return 200, layout_doc(graph, segments[1], parse_selection(selects))
        if len(segments) == 3 and segments[0] == "canvas" and segments[2] == "align":
            params.setdefault("minFraction", "0")
            return 200, align_doc(
                graph,
                segments[1],
                _float_param(params, "x"),
                _float_param(params, "y"),
                _float_param(params, "w"),
                _float_param(params, "h"),
                _float_param(params, "minFraction"),
                parse_selection(selects),
            )
        if len(segments) == 2 and segments[0] == "text":
            return 200, text_doc(graph, segments[1])
        raise ServiceError(404, "E_NOT_FOUND", f"no such endpoint: {path}")
    except ServiceError as exc:
        return exc.status, _json_bytes({"code": exc.code, "message": str(exc)})


class _Handler(BaseHTTPRequestHandler):
    graph: Graph  # set by make_server

    def do_GET(self) -> None:  # noqa: N802 (BaseHTTPRequestHandler API)
        split = urlsplit(self.path)
        status, body = respond(self.graph, split.path, split.query)
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format: str, *args: object) -> None:
        pass


def make_server(graph: Graph, port: int = 8077, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Bind a server over an immutable graph snapshot (port 0 = ephemeral)."""
    handler = type("BoundHandler", (_Handler,), {"graph": graph})
    return ThreadingHTTPServer((host, port), handler)
