import json
import urllib.error
import urllib.request
from urllib.parse import quote

from sharedcanvas.graph import parse_manifest, serialize

from .conftest import load_fixture


def get(url: str):
    try:
        with urllib.request.urlopen(url) as response:
            return response.status, response.read(), response.headers
    except urllib.error.HTTPError as err:
        return err.code, err.read(), err.headers


def enc(uri: str) -> str:
    return quote(uri, safe="")


class TestLayoutEndpoint:
    def test_two_paintings(self, serve):
        base = serve(load_fixture("page_image_text.scx"))
        status, body, headers = get(f"{base}/canvas/{enc('urn:ex:canvas:p1')}/layout")
        assert status == 200
        assert headers["Content-Type"].startswith("application/json")
        layout = json.loads(body)["resources"][0]
        assert len(layout["paintings"]) == 2

    def test_repeated_requests_byte_identical(self, serve):
        base = serve(load_fixture("three_layer_alignment.scx"))
        url = f"{base}/canvas/{enc('urn:sl:canvas:p1')}/layout"
        _, first, _ = get(url)
        for _ in range(3):
            _, again, _ = get(url)
            assert again == first

    def test_layout_is_valid_scx(self, serve):
        base = serve(load_fixture("rotated_zone.scx"))
        _, body, _ = get(f"{base}/canvas/{enc('urn:rz:canvas:p1')}/layout")
        assert serialize(parse_manifest(body, source="layout")) == body

    def test_unknown_canvas_404(self, serve):
        base = serve(load_fixture("page_image_text.scx"))
        status, body, _ = get(f"{base}/canvas/{enc('urn:ex:canvas:p9')}/layout")
        assert status == 404
        assert json.loads(body)["code"] == "E_UNKNOWN_NODE"

    def test_select_switches_option(self, serve):
        base = serve(load_fixture("folded_letter.scx"))
        url = f"{base}/canvas/{enc('urn:fl:canvas:p1')}/layout"
        _, open_body, _ = get(url)
        select = quote("urn:fl:choice:fold=urn:fl:zone:address-folded", safe="")
        _, folded_body, _ = get(f"{url}?select={select}")
        open_ids = {p["annotation"] for p in json.loads(open_body)["resources"][0]["paintings"]}
        folded_ids = {p["annotation"] for p in json.loads(folded_body)["resources"][0]["paintings"]}
        assert open_ids - folded_ids == {"urn:fl:anno:addr-img", "urn:fl:anno:addr-text"}

    def test_bad_selection_400(self, serve):
        base = serve(load_fixture("folded_letter.scx"))
        select = quote("urn:fl:choice:fold=urn:fl:zone:nonsense", safe="")
        status, body, _ = get(f"{base}/canvas/{enc('urn:fl:canvas:p1')}/layout?select={select}")
        assert status == 400
        assert json.loads(body)["code"] == "E_BAD_SELECTION"


class TestAlignEndpoint:
    def test_hits_grouped_by_layer(self, serve):
        base = serve(load_fixture("three_layer_alignment.scx"))
        url = f"{base}/canvas/{enc('urn:sl:canvas:p1')}/align?x=100&y=460&w=800&h=100"
        status, body, _ = get(url)
        assert status == 200
        doc = json.loads(body)
        assert [g["layer"] for g in doc["groups"]] == ["urn:sl:ImgLyr", "urn:sl:Txt1Lyr", "urn:sl:Txt2Lyr"]
        translation = doc["groups"][2]["hits"]
        assert [(h["annotation"], h["overlapFraction"]) for h in translation] == [
            ("urn:sl:anno:para2", 0.7),
            ("urn:sl:anno:para1", 0.3),
        ]

    def test_zero_width_400(self, serve):
        base = serve(load_fixture("three_layer_alignment.scx"))
        status, body, _ = get(f"{base}/canvas/{enc('urn:sl:canvas:p1')}/align?x=0&y=0&w=0&h=10")
        assert status == 400

    def test_missing_param_400(self, serve):
        base = serve(load_fixture("three_layer_alignment.scx"))
        status, body, _ = get(f"{base}/canvas/{enc('urn:sl:canvas:p1')}/align?x=0&y=0&w=10")
        assert status == 400
        assert json.loads(body)["code"] == "E_BAD_QUERY"

    def test_min_fraction_filters(self, serve):
        base = serve(load_fixture("three_layer_alignment.scx"))
        url = f"{base}/canvas/{enc('urn:sl:canvas:p1')}/align?x=100&y=460&w=800&h=100&minFraction=0.5"
        _, body, _ = get(url)
        hits = [h["annotation"] for g in json.loads(body)["groups"] for h in g["hits"]]
        assert "urn:sl:anno:para1" not in hits
        assert "urn:sl:anno:para2" in hits


class TestManifestAndSequenceEndpoints:
    def test_manifest_document(self, serve):
        base = serve(load_fixture("basic_manifest.scx"))
        status, body, _ = get(f"{base}/manifest")
        assert status == 200
        ids = {r["id"] for r in json.loads(body)["resources"]}
        assert "urn:bm:manifest" in ids
        assert "urn:bm:seq:binding" in ids
        assert "urn:bm:list:images" in ids

    def test_sequence_document(self, serve):
        base = serve(load_fixture("basic_manifest.scx"))
        status, body, _ = get(f"{base}/sequence/{enc('urn:bm:seq:binding')}")
        assert status == 200
        doc = json.loads(body)
        assert [c["id"] for c in doc["canvases"]] == ["urn:bm:canvas:f1r", "urn:bm:canvas:f1v"]
        assert doc["canvases"][0]["width"] == 700

    def test_unknown_sequence_404(self, serve):
        base = serve(load_fixture("basic_manifest.scx"))
        status, _, _ = get(f"{base}/sequence/{enc('urn:bm:seq:nope')}")
        assert status == 404

    def test_unknown_endpoint_404(self, serve):
        base = serve(load_fixture("basic_manifest.scx"))
        status, body, _ = get(f"{base}/nothing/here")
        assert status == 404
        assert json.loads(body)["code"] == "E_NOT_FOUND"


class TestTextEndpoint:
    def test_text_with_segments_and_statements(self, serve):
        base = serve(load_fixture("named_entity.scx"))
        status, body, _ = get(f"{base}/text/{enc('urn:ne:anno:page-text')}")
        assert status == 200
        doc = json.loads(body)
        assert doc["text"] == "Dear Carel, the ship sailed."
        by_subject = {s["subject"]: s for s in doc["segments"]}
        assert by_subject["urn:ne:ct2"]["text"] == "Carel"
        assert by_subject["urn:ne:ct2"]["statements"] == [
            {"subject": "urn:ne:ct2", "predicate": "ex:references", "object": "ex:Carel"}
        ]
        assert by_subject["urn:ne:ct1"]["statements"][0]["object"] == "ex:Sentence"

    def test_unknown_annotation_404(self, serve):
        base = serve(load_fixture("named_entity.scx"))
        status, _, _ = get(f"{base}/text/{enc('urn:ne:anno:none')}")
        assert status == 404

    def test_cors_header_present(self, serve):
        base = serve(load_fixture("named_entity.scx"))
        _, _, headers = get(f"{base}/manifest")
        assert headers["Access-Control-Allow-Origin"] == "*"
