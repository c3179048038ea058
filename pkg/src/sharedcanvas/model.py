"""Typed domain objects for distributed manuscript-layout graphs.

A description of a manuscript is a graph of nodes identified by URI:
abstract canvases and zones, annotations associating content bodies
with the canvas segments they belong to, reusable segment constraints,
choices between alternatives, and the ordered aggregations (sequences,
ranges, annotation lists, layers, manifests) used for ordering and
discovery.

Everything here is a plain immutable dataclass. Constructors accept
structurally incomplete nodes on purpose: descriptions arrive from many
independent sources and must be representable, reportable, and
round-trippable even when broken. Rule checking is explicit, via
:func:`sharedcanvas.validation.validate_node`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ANNOTATION_KINDS = frozenset({"image", "text", "audio", "zone", "comment", "semantic", "generic"})
LIST_KINDS = frozenset({"text", "image", "audio", "zone", "comment", "mixed"})
CHOICE_KINDS = frozenset({"text", "zone", "generic"})
CONSTRAINT_FORMS = frozenset({"box", "svg-path", "text-offset"})
BOX_UNITS = frozenset({"pixel", "percent"})


def is_uri(value: object) -> bool:
    """True if ``value`` looks like an absolute URI: non-empty scheme, a colon, a remainder."""
    return isinstance(value, str) and value.find(":") >= 1


@dataclass(frozen=True)
class Finding:
    """One validation or resolution diagnostic attached to a node."""

    severity: str  # "error" | "warning"
    code: str
    node: str
    message: str


@dataclass(frozen=True)
class Canvas:
    """Abstract 2-D space standing for one physical page.

    The origin is the top-left corner; x grows rightward, y downward.
    Dimensions are abstract reals sized relative to the physical object.
    """

    id: str
    height: float = 0.0
    width: float = 0.0
    label: str | None = None


@dataclass(frozen=True)
class Zone:
    """A canvas-like space without page semantics.

    A zone groups annotations with their relative layout and acquires a
    position only when an annotation places it onto a canvas (or another
    zone). ``reading_angle`` is the clockwise rotation, in degrees, that
    brings the zone's content to reading orientation.
    """

    id: str
    height: float = 0.0
    width: float = 0.0
    reading_angle: float = 0.0


@dataclass(frozen=True)
class Ref:
    """A body or target reference, optionally constrained to a segment.

    When ``constraint`` is set, the pair (resource, constraint) denotes a
    segment of the resource and must carry its own ``id`` so other
    statements can address the segment. When ``choice`` is true,
    ``resource`` names a :class:`Choice` node instead of the content
    itself.
    """

    resource: str
    constraint: str | None = None
    id: str | None = None
    choice: bool = False


@dataclass(frozen=True)
class Annotation:
    """Associates a body with one or more targets."""

    id: str
    kind: str = "generic"
    body: Ref | None = None
    targets: tuple[Ref, ...] = ()


@dataclass(frozen=True)
class Constraint:
    """Reusable description of a segment.

    Exactly one form is meaningful per node: a box (pixel or percent
    units), an SVG path polygon, or a character offset+length into a
    text. Fields of the other forms stay None.
    """

    id: str
    form: str | None = None
    unit: str | None = None
    x: float | None = None
    y: float | None = None
    w: float | None = None
    h: float | None = None
    path: str | None = None
    offset: int | None = None
    length: int | None = None


@dataclass(frozen=True)
class Choice:
    """Ordered alternatives; the first option is the default."""

    id: str
    choice_kind: str = "generic"
    options: tuple[str, ...] = ()


@dataclass(frozen=True)
class Sequence:
    """One ordering of canvases (a reading or binding order)."""

    id: str
    canvases: tuple[str, ...] = ()
    label: str | None = None


@dataclass(frozen=True)
class Range:
    """A sub-section of a sequence (chapter, quire, text)."""

    id: str
    sequence: str | None = None
    canvases: tuple[str, ...] = ()
    label: str | None = None


@dataclass(frozen=True)
class AnnotationList:
    """Discovery-level ordered collection of annotations."""

    id: str
    list_kind: str = "mixed"
    annotations: tuple[str, ...] = ()


@dataclass(frozen=True)
class Layer:
    """Grouping of annotations (or lists of them) that belong together,
    e.g. one complete transcription."""

    id: str
    members: tuple[str, ...] = ()
    label: str | None = None


@dataclass(frozen=True)
class Manifest:
    """Top-level collection tying sequences and discovery lists together."""

    id: str
    sequences: tuple[str, ...] = ()
    discovery: tuple[str, ...] = ()
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ForeignNode:
    """A node of a type this model does not know.

    The property bag is preserved verbatim through round-trips; the model
    is explicitly extensible and foreign content must survive untouched.
    """

    id: str
    type: str
    properties: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SemanticStatement:
    """A machine-readable statement, used as the body of a semantic annotation.

    ``subject`` is typically the id of a constrained target (an identified
    segment); ``object`` may be a URI or a literal string.
    """

    subject: str
    predicate: str
    object: str


Node = (
    Canvas
    | Zone
    | Annotation
    | Constraint
    | Choice
    | Sequence
    | Range
    | AnnotationList
    | Layer
    | Manifest
    | ForeignNode
)

# Wire-format type names for the recognized node classes.
TYPE_NAMES: dict[type, str] = {
    Canvas: "Canvas",
    Zone: "Zone",
    Annotation: "Annotation",
    Constraint: "Constraint",
    Choice: "Choice",
    Sequence: "Sequence",
    Range: "Range",
    AnnotationList: "AnnotationList",
    Layer: "Layer",
    Manifest: "Manifest",
}
CLASS_BY_TYPE_NAME: dict[str, type] = {name: cls for cls, name in TYPE_NAMES.items()}
