"""Parsing, serialization, merging, and closure fetching for layout graphs.

The interchange format ("SCX") is a UTF-8 JSON document: a top-level
object holding a ``"resources"`` array with one object per node. Every
node object carries ``"id"`` and ``"type"``; recognized types get their
type-specific keys decoded into typed nodes, unknown types are kept as
property bags. Array order is significant everywhere and survives
round-trips.

Serialization is deterministic: nodes sorted lexicographically by id,
object keys in the documented order, 2-space indentation, ``\\n`` line
endings. Two graphs that are equal up to node ordering produce
byte-identical documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from typing import Callable, Iterator, Sequence as SequenceType, TypeVar

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
    Node,
    Range,
    Ref,
    Sequence,
    Zone,
    CLASS_BY_TYPE_NAME,
    TYPE_NAMES,
    is_uri,
)


class ScxParseError(Exception):
    """Malformed interchange document."""

    def __init__(self, message: str, source: str = "<memory>", line: int | None = None, col: int | None = None):
        position = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{source}{position}: {message}")
        self.source = source
        self.line = line
        self.col = col


class MergeConflictError(Exception):
    """Two sources disagree about a property of the same node."""

    code = "E_CONFLICT"

    def __init__(self, node_id: str, prop: str, source_a: str, source_b: str):
        super().__init__(
            f"E_CONFLICT: node {node_id} property {prop!r} differs between {source_a} and {source_b}"
        )
        self.node_id = node_id
        self.prop = prop
        self.source_a = source_a
        self.source_b = source_b


class FetchError(Exception):
    """A root source could not be fetched or parsed."""

    code = "E_FETCH"


@dataclass(eq=False)
class Graph:
    """A set of typed nodes keyed by URI.

    ``provenance`` records which source each node was first loaded from;
    ``warnings`` accumulates non-fatal closure diagnostics. Equality
    compares node content only, since provenance is metadata about a
    particular load, not about the description itself.
    """

    nodes: dict[str, Node] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)
    warnings: list[Finding] = field(default_factory=list)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.nodes == other.nodes

    def get(self, node_id: str) -> Node | None:
        return self.nodes.get(node_id)

    def by_type(self, cls: type[_N]) -> list[_N]:
        """All nodes of one class, in id order."""
        return [n for _, n in sorted(self.nodes.items()) if type(n) is cls]


_N = TypeVar("_N")


class _EntryReader:
    """Pulls typed values out of one resource entry, tracking leftovers."""

    def __init__(self, entry: dict, node_id: str, source: str):
        self.entry = dict(entry)
        self.node_id = node_id
        self.source = source

    def _fail(self, message: str) -> ScxParseError:
        return ScxParseError(f"node {self.node_id}: {message}", self.source)

    def string(self, key: str, default: str | None = None) -> str | None:
        value = self.entry.pop(key, default)
        if value is not None and not isinstance(value, str):
            raise self._fail(f"{key!r} must be a string")
        return value

    def number(self, key: str, default: float | None = None) -> float | None:
        value = self.entry.pop(key, default)
        if value is not None and (isinstance(value, bool) or not isinstance(value, (int, float))):
            raise self._fail(f"{key!r} must be a number")
        return value

    def integer(self, key: str, default: int | None = None) -> int | None:
        value = self.entry.pop(key, default)
        if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
            raise self._fail(f"{key!r} must be an integer")
        return value

    def string_tuple(self, key: str) -> tuple[str, ...]:
        value = self.entry.pop(key, [])
        if not isinstance(value, list) or any(not isinstance(v, str) for v in value):
            raise self._fail(f"{key!r} must be an array of strings")
        return tuple(value)

    def string_map(self, key: str) -> dict[str, str]:
        value = self.entry.pop(key, {})
        if not isinstance(value, dict) or any(
            not isinstance(k, str) or not isinstance(v, str) for k, v in value.items()
        ):
            raise self._fail(f"{key!r} must be an object of string values")
        return dict(value)

    def ref(self, key: str) -> Ref | None:
        value = self.entry.pop(key, None)
        if value is None:
            return None
        return self._decode_ref(value, key)

    def ref_tuple(self, key: str) -> tuple[Ref, ...]:
        value = self.entry.pop(key, [])
        if not isinstance(value, list):
            raise self._fail(f"{key!r} must be an array")
        return tuple(self._decode_ref(v, key) for v in value)

    def _decode_ref(self, value: object, key: str) -> Ref:
        if not isinstance(value, dict):
            raise self._fail(f"{key!r} entries must be objects")
        extra = set(value) - {"resource", "constraint", "id", "choice"}
        if extra:
            raise self._fail(f"{key!r} entry has unexpected keys {sorted(extra)}")
        if "choice" in value:
            if set(value) != {"choice"} or not isinstance(value["choice"], str):
                raise self._fail(f"{key!r} choice entry must be exactly {{\"choice\": string}}")
            return Ref(resource=value["choice"], choice=True)
        if not isinstance(value.get("resource"), str):
            raise self._fail(f"{key!r} entry needs a string 'resource'")
        constraint = value.get("constraint")
        ref_id = value.get("id")
        if constraint is not None and not isinstance(constraint, str):
            raise self._fail(f"{key!r} entry 'constraint' must be a string")
        if ref_id is not None and not isinstance(ref_id, str):
            raise self._fail(f"{key!r} entry 'id' must be a string")
        return Ref(resource=value["resource"], constraint=constraint, id=ref_id)

    def finish(self) -> None:
        if self.entry:
            raise self._fail(f"unexpected keys {sorted(self.entry)}")


def _node_from_entry(entry: object, index: int, source: str) -> Node:
    if not isinstance(entry, dict):
        raise ScxParseError(f"resource #{index} is not an object", source)
    node_id = entry.get("id")
    type_name = entry.get("type")
    if not isinstance(node_id, str) or not node_id:
        raise ScxParseError(f"resource #{index} is missing a string 'id'", source)
    if not isinstance(type_name, str) or not type_name:
        raise ScxParseError(f"resource #{index} ({node_id}) is missing a string 'type'", source)
    cls = CLASS_BY_TYPE_NAME.get(type_name)
    if cls is None:
        props = {k: v for k, v in entry.items() if k not in ("id", "type")}
        return ForeignNode(id=node_id, type=type_name, properties=props)

    r = _EntryReader(entry, node_id, source)
    r.entry.pop("id")
    r.entry.pop("type")
    if cls is Canvas:
        node: Node = Canvas(
            id=node_id, label=r.string("label"),
            height=r.number("height", 0.0), width=r.number("width", 0.0),
        )
    elif cls is Zone:
        node = Zone(
            id=node_id,
            height=r.number("height", 0.0), width=r.number("width", 0.0),
            reading_angle=r.number("readingAngle", 0.0),
        )
    elif cls is Annotation:
        node = Annotation(
            id=node_id, kind=r.string("kind", "generic"),
            body=r.ref("body"), targets=r.ref_tuple("targets"),
        )
    elif cls is Constraint:
        node = Constraint(
            id=node_id, form=r.string("form"), unit=r.string("unit"),
            x=r.number("x"), y=r.number("y"), w=r.number("w"), h=r.number("h"),
            path=r.string("path"), offset=r.integer("offset"), length=r.integer("length"),
        )
    elif cls is Choice:
        node = Choice(
            id=node_id, choice_kind=r.string("choiceKind", "generic"),
            options=r.string_tuple("options"),
        )
    elif cls is Sequence:
        node = Sequence(id=node_id, label=r.string("label"), canvases=r.string_tuple("canvases"))
    elif cls is Range:
        node = Range(
            id=node_id, label=r.string("label"),
            canvases=r.string_tuple("canvases"), sequence=r.string("sequence"),
        )
    elif cls is AnnotationList:
        node = AnnotationList(
            id=node_id, list_kind=r.string("listKind", "mixed"),
            annotations=r.string_tuple("annotations"),
        )
    elif cls is Layer:
        node = Layer(id=node_id, label=r.string("label"), members=r.string_tuple("members"))
    else:
        node = Manifest(
            id=node_id, sequences=r.string_tuple("sequences"),
            discovery=r.string_tuple("discovery"), metadata=r.string_map("metadata"),
        )
    r.finish()
    return node


def parse_manifest(data: bytes | str, source: str = "<memory>") -> Graph:
    """Parse one interchange document into a Graph."""
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScxParseError(exc.msg, source, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("resources"), list):
        raise ScxParseError("top level must be an object with a 'resources' array", source)
    graph = Graph()
    for index, entry in enumerate(doc["resources"]):
        node = _node_from_entry(entry, index, source)
        if node.id in graph.nodes:
            raise ScxParseError(f"duplicate id {node.id!r}", source)
        graph.nodes[node.id] = node
        graph.provenance[node.id] = source
    return graph


def _encode_ref(ref: Ref) -> dict:
    if ref.choice:
        return {"choice": ref.resource}
    out: dict = {"resource": ref.resource}
    if ref.constraint is not None:
        out["constraint"] = ref.constraint
    if ref.id is not None:
        out["id"] = ref.id
    return out


def _entry_from_node(node: Node) -> dict:
    if isinstance(node, ForeignNode):
        entry = {"id": node.id, "type": node.type}
        for key in sorted(node.properties):
            entry[key] = node.properties[key]
        return entry
    entry = {"id": node.id, "type": TYPE_NAMES[type(node)]}
    if isinstance(node, Canvas):
        if node.label is not None:
            entry["label"] = node.label
        entry["height"] = node.height
        entry["width"] = node.width
    elif isinstance(node, Zone):
        entry["height"] = node.height
        entry["width"] = node.width
        if node.reading_angle != 0:
            entry["readingAngle"] = node.reading_angle
    elif isinstance(node, Annotation):
        entry["kind"] = node.kind
        if node.body is not None:
            entry["body"] = _encode_ref(node.body)
        entry["targets"] = [_encode_ref(t) for t in node.targets]
    elif isinstance(node, Constraint):
        entry["form"] = node.form
        for key, value in (
            ("unit", node.unit), ("x", node.x), ("y", node.y), ("w", node.w), ("h", node.h),
            ("path", node.path), ("offset", node.offset), ("length", node.length),
        ):
            if value is not None:
                entry[key] = value
    elif isinstance(node, Choice):
        entry["choiceKind"] = node.choice_kind
        entry["options"] = list(node.options)
    elif isinstance(node, Sequence):
        if node.label is not None:
            entry["label"] = node.label
        entry["canvases"] = list(node.canvases)
    elif isinstance(node, Range):
        if node.label is not None:
            entry["label"] = node.label
        entry["canvases"] = list(node.canvases)
        if node.sequence is not None:
            entry["sequence"] = node.sequence
    elif isinstance(node, AnnotationList):
        entry["listKind"] = node.list_kind
        entry["annotations"] = list(node.annotations)
    elif isinstance(node, Layer):
        if node.label is not None:
            entry["label"] = node.label
        entry["members"] = list(node.members)
    elif isinstance(node, Manifest):
        entry["sequences"] = list(node.sequences)
        entry["discovery"] = list(node.discovery)
        entry["metadata"] = dict(node.metadata)
    return entry


def serialize(graph: Graph) -> bytes:
    """Serialize a graph to canonical interchange bytes."""
    resources = [_entry_from_node(graph.nodes[node_id]) for node_id in sorted(graph.nodes)]
    text = json.dumps({"resources": resources}, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


_UNION_WHEN_NONE = {"label", "body", "sequence", "unit", "x", "y", "w", "h", "path", "offset", "length", "form"}


def _merge_nodes(a: Node, b: Node, source_a: str, source_b: str) -> Node:
    if type(a) is not type(b) or (isinstance(a, ForeignNode) and a.type != b.type):
        raise MergeConflictError(a.id, "type", source_a, source_b)
    if a == b:
        return a
    if isinstance(a, ForeignNode):
        for key in sorted(set(a.properties) | set(b.properties)):
            if a.properties.get(key) != b.properties.get(key):
                raise MergeConflictError(a.id, key, source_a, source_b)
        return a
    updates: dict[str, object] = {}
    for f in fields(a):
        va, vb = getattr(a, f.name), getattr(b, f.name)
        if va == vb:
            continue
        if f.name in _UNION_WHEN_NONE and (va is None or vb is None):
            updates[f.name] = vb if va is None else va
            continue
        raise MergeConflictError(a.id, f.name, source_a, source_b)
    return replace(a, **updates)


def merge(graphs: SequenceType[Graph]) -> Graph:
    """Merge graphs into one.

    Nodes with the same id must agree: identical nodes collapse to one,
    an optional property set on only one side is adopted, and any other
    disagreement (scalars or ordered lists) raises
    :class:`MergeConflictError` naming both sources. Silent disagreement
    about e.g. canvas dimensions would corrupt all downstream geometry.
    """
    out = Graph()
    for g in graphs:
        for node_id, node in g.nodes.items():
            source = g.provenance.get(node_id, "<unknown>")
            if node_id not in out.nodes:
                out.nodes[node_id] = node
                out.provenance[node_id] = source
            else:
                out.nodes[node_id] = _merge_nodes(
                    out.nodes[node_id], node, out.provenance[node_id], source
                )
        out.warnings.extend(g.warnings)
    return out


@dataclass(frozen=True)
class FetchPlan:
    """What to load and how far to follow references."""

    roots: tuple[str, ...]
    allow_remote: bool = False
    max_depth: int = 8

    def __post_init__(self) -> None:
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")


def _is_remote(uri: str) -> bool:
    return uri.startswith("http://") or uri.startswith("https://")


def _aggregation_refs(graph: Graph) -> Iterator[str]:
    """URIs whose referencing context guarantees an aggregation node.

    Only these are safe to dereference automatically; body and target
    resources (images, texts) must never be crawled.
    """
    for manifest in graph.by_type(Manifest):
        yield from manifest.sequences
        yield from manifest.discovery
    for rng in graph.by_type(Range):
        if rng.sequence is not None:
            yield rng.sequence


Fetcher = Callable[[str], "bytes | None"]


def fetch_closure(plan: FetchPlan, fetcher: Fetcher) -> Graph:
    """Load the roots and follow aggregation references until closed.

    ``fetcher`` maps a source identifier to document bytes; it may return
    None to signal "out of policy" (skipped silently) or raise to signal
    failure. Failures on roots abort; failures on discovered aggregations
    are recorded as warnings on the graph and the node stays unresolved.
    Already-loaded nodes and already-attempted sources are never fetched
    twice, so reference cycles terminate.
    """
    graphs = []
    attempted: set[str] = set()
    for root in plan.roots:
        try:
            data = fetcher(root)
        except Exception as exc:
            raise FetchError(f"cannot fetch root {root}: {exc}") from exc
        if data is None:
            raise FetchError(f"cannot fetch root {root}: refused by fetch policy")
        graphs.append(parse_manifest(data, source=root))
        attempted.add(root)
    graph = merge(graphs)

    for _hop in range(plan.max_depth):
        candidates = sorted(
            uri
            for uri in set(_aggregation_refs(graph))
            if uri not in graph.nodes and uri not in attempted and is_uri(uri)
        )
        if not candidates:
            break
        fetched = []
        for uri in candidates:
            attempted.add(uri)
            if _is_remote(uri) and not plan.allow_remote:
                continue
            try:
                data = fetcher(uri)
                if data is None:
                    continue
                fetched.append(parse_manifest(data, source=uri))
            except Exception as exc:
                graph.warnings.append(
                    Finding("warning", "W_FETCH_FAILED", uri, f"could not load referenced aggregation: {exc}")
                )
        if fetched:
            graph = merge([graph] + fetched)
    return graph
