import pytest

from sharedcanvas.graph import Graph
from sharedcanvas.model import (
    Annotation,
    AnnotationList,
    Canvas,
    Choice,
    Constraint,
    ForeignNode,
    Layer,
    Manifest,
    Range,
    Ref,
    Sequence,
    Zone,
)
from sharedcanvas.validation import validate_graph, validate_node

from .conftest import load_fixture


def graph_of(*nodes) -> Graph:
    return Graph(nodes={n.id: n for n in nodes}, provenance={n.id: "<test>" for n in nodes})


CANVAS = Canvas(id="urn:t:c1", height=800, width=600)
ZONE = Zone(id="urn:t:z1", height=100, width=200)
TEXT = ForeignNode(id="urn:t:txt", type="Text", properties={"chars": "hello"})
CONSTRAINT = Constraint(id="urn:t:con", form="box", unit="pixel", x=0, y=0, w=10, h=10)


def sole_error(graph: Graph, node_id: str, code: str) -> None:
    findings = validate_node(graph, node_id)
    errors = [f for f in findings if f.severity == "error"]
    assert [f.code for f in errors] == [code], findings


class TestWellFormedNodesAreClean:
    @pytest.mark.parametrize(
        "fixture",
        [
            "basic_manifest.scx",
            "page_image_text.scx",
            "folded_letter.scx",
            "named_entity.scx",
            "shared_template.scx",
            "rotated_zone.scx",
            "rotated_line_boxes.scx",
            "three_layer_alignment.scx",
        ],
    )
    def test_fixture_has_no_errors(self, fixture):
        graph = load_fixture(fixture)
        errors = [f for f in validate_graph(graph) if f.severity == "error"]
        assert errors == []

    def test_basic_manifest_has_no_warnings_either(self):
        assert validate_graph(load_fixture("basic_manifest.scx")) == []


class TestUnknownNode:
    def test_unknown_id(self):
        sole_error(graph_of(CANVAS), "urn:t:missing", "E_UNKNOWN_NODE")


class TestCanvasAndZone:
    def test_zero_width(self):
        sole_error(graph_of(Canvas(id="urn:t:c", height=800, width=0)), "urn:t:c", "E_NONPOSITIVE_DIMENSION")

    def test_negative_height(self):
        sole_error(graph_of(Zone(id="urn:t:z", height=-5, width=10)), "urn:t:z", "E_NONPOSITIVE_DIMENSION")

    def test_reading_angle_out_of_range(self):
        sole_error(graph_of(Zone(id="urn:t:z", height=5, width=10, reading_angle=360.0)), "urn:t:z", "E_ANGLE_RANGE")

    def test_bad_uri(self):
        sole_error(graph_of(Canvas(id="nocolon", height=1, width=1)), "nocolon", "E_BAD_URI")


class TestAnnotation:
    def test_missing_body(self):
        anno = Annotation(id="urn:t:a", kind="text", body=None, targets=(Ref(resource=CANVAS.id),))
        sole_error(graph_of(CANVAS, anno), "urn:t:a", "E_MISSING_BODY")

    def test_no_targets(self):
        anno = Annotation(id="urn:t:a", kind="text", body=Ref(resource=TEXT.id))
        sole_error(graph_of(TEXT, anno), "urn:t:a", "E_NO_TARGETS")

    def test_unknown_kind(self):
        anno = Annotation(id="urn:t:a", kind="video", body=Ref(resource=TEXT.id), targets=(Ref(resource=CANVAS.id),))
        sole_error(graph_of(TEXT, CANVAS, anno), "urn:t:a", "E_BAD_KIND")

    def test_external_target_is_single_warning(self):
        anno = Annotation(
            id="urn:t:a", kind="text", body=Ref(resource=TEXT.id), targets=(Ref(resource="urn:other:c9"),)
        )
        findings = validate_node(graph_of(TEXT, anno), "urn:t:a")
        assert [(f.severity, f.code) for f in findings] == [("warning", "W_EXTERNAL_REF")]

    def test_zone_body_must_be_zone(self):
        anno = Annotation(id="urn:t:a", kind="zone", body=Ref(resource=TEXT.id), targets=(Ref(resource=CANVAS.id),))
        sole_error(graph_of(TEXT, CANVAS, anno), "urn:t:a", "E_ZONE_BODY")

    def test_zone_body_choice_must_be_zone_choice(self):
        choice = Choice(id="urn:t:ch", choice_kind="text", options=(TEXT.id,))
        anno = Annotation(
            id="urn:t:a", kind="zone", body=Ref(resource=choice.id, choice=True), targets=(Ref(resource=CANVAS.id),)
        )
        sole_error(graph_of(TEXT, CANVAS, choice, anno), "urn:t:a", "E_ZONE_BODY")

    def test_constrained_target_needs_own_id(self):
        anno = Annotation(
            id="urn:t:a",
            kind="text",
            body=Ref(resource=TEXT.id),
            targets=(Ref(resource=CANVAS.id, constraint=CONSTRAINT.id),),
        )
        sole_error(graph_of(TEXT, CANVAS, CONSTRAINT, anno), "urn:t:a", "E_CONSTRAINED_ID")

    def test_constrained_id_must_differ_from_resource(self):
        anno = Annotation(
            id="urn:t:a",
            kind="text",
            body=Ref(resource=TEXT.id),
            targets=(Ref(resource=CANVAS.id, constraint=CONSTRAINT.id, id=CANVAS.id),),
        )
        sole_error(graph_of(TEXT, CANVAS, CONSTRAINT, anno), "urn:t:a", "E_CONSTRAINED_ID")

    def test_constraint_ref_must_be_constraint(self):
        anno = Annotation(
            id="urn:t:a",
            kind="text",
            body=Ref(resource=TEXT.id),
            targets=(Ref(resource=CANVAS.id, constraint=TEXT.id, id="urn:t:seg"),),
        )
        sole_error(graph_of(TEXT, CANVAS, anno), "urn:t:a", "E_REF_TYPE")


class TestConstraint:
    def test_percent_overflow(self):
        con = Constraint(id="urn:t:p", form="box", unit="percent", x=10, y=10, w=95, h=5)
        sole_error(graph_of(con), "urn:t:p", "E_PERCENT_OVERFLOW")

    def test_percent_origin_out_of_range(self):
        con = Constraint(id="urn:t:p", form="box", unit="percent", x=-5, y=10, w=5, h=5)
        sole_error(graph_of(con), "urn:t:p", "E_PERCENT_OVERFLOW")

    def test_zero_area_box(self):
        con = Constraint(id="urn:t:p", form="box", unit="pixel", x=0, y=0, w=0, h=10)
        sole_error(graph_of(con), "urn:t:p", "E_NONPOSITIVE_DIMENSION")

    def test_negative_pixel_origin(self):
        con = Constraint(id="urn:t:p", form="box", unit="pixel", x=-1, y=0, w=5, h=10)
        sole_error(graph_of(con), "urn:t:p", "E_NEGATIVE_ORIGIN")

    def test_unknown_form(self):
        sole_error(graph_of(Constraint(id="urn:t:p", form="circle")), "urn:t:p", "E_CONSTRAINT_FORM")

    def test_incomplete_box(self):
        con = Constraint(id="urn:t:p", form="box", unit="pixel", x=1, y=1, w=5)
        sole_error(graph_of(con), "urn:t:p", "E_CONSTRAINT_FORM")

    def test_bad_svg_path(self):
        con = Constraint(id="urn:t:p", form="svg-path", path="M 0 0 C 1 1 2 2 3 3 Z")
        sole_error(graph_of(con), "urn:t:p", "E_SVG_UNSUPPORTED")

    def test_degenerate_svg_path(self):
        con = Constraint(id="urn:t:p", form="svg-path", path="M 0 0 L 1 1 Z")
        sole_error(graph_of(con), "urn:t:p", "E_DEGENERATE")

    def test_text_span_needs_positive_length(self):
        con = Constraint(id="urn:t:p", form="text-offset", offset=3, length=0)
        sole_error(graph_of(con), "urn:t:p", "E_TEXT_SPAN")

    def test_text_span_needs_non_negative_offset(self):
        con = Constraint(id="urn:t:p", form="text-offset", offset=-1, length=4)
        sole_error(graph_of(con), "urn:t:p", "E_TEXT_SPAN")


class TestChoice:
    def test_empty_options(self):
        sole_error(graph_of(Choice(id="urn:t:ch", choice_kind="text")), "urn:t:ch", "E_EMPTY_OPTIONS")

    def test_zone_choice_option_must_be_zone(self):
        choice = Choice(id="urn:t:ch", choice_kind="zone", options=(TEXT.id,))
        sole_error(graph_of(TEXT, choice), "urn:t:ch", "E_CHOICE_ZONE_OPTION")

    def test_unknown_choice_kind(self):
        choice = Choice(id="urn:t:ch", choice_kind="layout", options=(ZONE.id,))
        sole_error(graph_of(ZONE, choice), "urn:t:ch", "E_BAD_KIND")


class TestSequenceRange:
    def test_duplicate_canvases(self):
        seq = Sequence(id="urn:t:s", canvases=(CANVAS.id, CANVAS.id))
        sole_error(graph_of(CANVAS, seq), "urn:t:s", "E_DUPLICATE_CANVAS")

    def test_sequence_entry_must_be_canvas(self):
        seq = Sequence(id="urn:t:s", canvases=(TEXT.id,))
        sole_error(graph_of(TEXT, seq), "urn:t:s", "E_REF_TYPE")

    def test_range_canvas_must_be_in_sequence(self):
        other = Canvas(id="urn:t:c2", height=10, width=10)
        seq = Sequence(id="urn:t:s", canvases=(CANVAS.id,))
        rng = Range(id="urn:t:r", sequence=seq.id, canvases=(other.id,))
        sole_error(graph_of(CANVAS, other, seq, rng), "urn:t:r", "E_RANGE_NOT_IN_SEQUENCE")

    def test_range_must_preserve_sequence_order(self):
        c2 = Canvas(id="urn:t:c2", height=10, width=10)
        seq = Sequence(id="urn:t:s", canvases=(CANVAS.id, c2.id))
        rng = Range(id="urn:t:r", sequence=seq.id, canvases=(c2.id, CANVAS.id))
        sole_error(graph_of(CANVAS, c2, seq, rng), "urn:t:r", "E_RANGE_ORDER")

    def test_range_needs_sequence(self):
        rng = Range(id="urn:t:r", canvases=(CANVAS.id,))
        sole_error(graph_of(CANVAS, rng), "urn:t:r", "E_MISSING_FIELD")


class TestAggregations:
    def test_list_kind_mismatch(self):
        anno = Annotation(id="urn:t:a", kind="image", body=Ref(resource=TEXT.id), targets=(Ref(resource=CANVAS.id),))
        lst = AnnotationList(id="urn:t:l", list_kind="text", annotations=(anno.id,))
        sole_error(graph_of(TEXT, CANVAS, anno, lst), "urn:t:l", "E_LIST_KIND_MISMATCH")

    def test_mixed_list_accepts_any(self):
        anno = Annotation(id="urn:t:a", kind="image", body=Ref(resource=TEXT.id), targets=(Ref(resource=CANVAS.id),))
        lst = AnnotationList(id="urn:t:l", list_kind="mixed", annotations=(anno.id,))
        assert validate_node(graph_of(TEXT, CANVAS, anno, lst), "urn:t:l") == []

    def test_empty_layer(self):
        sole_error(graph_of(Layer(id="urn:t:ly")), "urn:t:ly", "E_EMPTY_LAYER")

    def test_layer_member_type(self):
        layer = Layer(id="urn:t:ly", members=(CANVAS.id,))
        sole_error(graph_of(CANVAS, layer), "urn:t:ly", "E_LAYER_MEMBER_TYPE")

    def test_manifest_needs_sequence(self):
        sole_error(graph_of(Manifest(id="urn:t:m")), "urn:t:m", "E_NO_SEQUENCES")

    def test_manifest_discovery_type(self):
        seq = Sequence(id="urn:t:s", canvases=(CANVAS.id,))
        manifest = Manifest(id="urn:t:m", sequences=(seq.id,), discovery=(CANVAS.id,))
        sole_error(graph_of(CANVAS, seq, manifest), "urn:t:m", "E_REF_TYPE")

    def test_foreign_nodes_have_no_findings(self):
        assert validate_node(graph_of(TEXT), TEXT.id) == []
