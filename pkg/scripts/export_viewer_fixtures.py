#!/usr/bin/env python3
"""Capture real service responses as viewer test fixtures.

Starts the HTTP service over the letter fixtures, performs the requests
the viewer makes (layouts, alignment for each transcription line, fold
toggles), and writes the byte-exact responses under
frontend/tests/fixtures/. The viewer test suite runs against these, so
it asserts against genuine endpoint output without needing a running
Python process.

    python3 scripts/export_viewer_fixtures.py
"""

from __future__ import annotations

import json
import sys
import threading
import urllib.request
from pathlib import Path
from urllib.parse import quote

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from sharedcanvas.graph import parse_manifest
from sharedcanvas.service import make_server

OUT = ROOT / "frontend" / "tests" / "fixtures"


def serve(fixture: str):
    path = ROOT / "fixtures" / fixture
    graph = parse_manifest(path.read_bytes(), source=fixture)
    server = make_server(graph, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    return server, f"http://{host}:{port}"


def fetch(base: str, path: str) -> bytes:
    with urllib.request.urlopen(base + path) as response:
        return response.read()


def save(name: str, data: bytes) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / name).write_bytes(data)
    print(f"wrote frontend/tests/fixtures/{name}")


def main() -> None:
    server, base = serve("three_layer_alignment.scx")
    canvas = quote("urn:sl:canvas:p1", safe="")
    save("letter_manifest.json", fetch(base, "/manifest"))
    save("letter_sequence.json", fetch(base, f"/sequence/{quote('urn:sl:seq:letter', safe='')}"))
    save("letter_layout.json", fetch(base, f"/canvas/{canvas}/layout"))
    expected = json.loads((ROOT / "fixtures" / "three_layer_alignment.expected.json").read_text())
    for index, query in enumerate(expected["queries"], start=1):
        x, y, w, h = query["region"]
        save(
            f"letter_align_line{index}.json",
            fetch(base, f"/canvas/{canvas}/align?x={x}&y={y}&w={w}&h={h}"),
        )
    save("letter_align_expected.json", json.dumps(expected, indent=2).encode())
    server.shutdown()

    server, base = serve("folded_letter.scx")
    canvas = quote("urn:fl:canvas:p1", safe="")
    save("folded_layout_open.json", fetch(base, f"/canvas/{canvas}/layout"))
    select = quote("urn:fl:choice:fold=urn:fl:zone:address-folded", safe="")
    save("folded_layout_folded.json", fetch(base, f"/canvas/{canvas}/layout?select={select}"))
    server.shutdown()


if __name__ == "__main__":
    main()
