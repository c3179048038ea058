#!/usr/bin/env python3
"""Regenerate the generated fixture files.

fixtures/rotated_line_boxes.scx mimics a line-detection service that
deskews a page scan by 3 degrees clockwise, finds rectangular line
boxes in the rotated frame, and publishes them as polygons in the
original canvas frame. The rotated-frame boxes and the angle are kept
in a RotatedFrameNote node inside the fixture so tests can re-derive
the polygons independently.

Run from the repository root:

    python3 scripts/build_fixtures.py
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from sharedcanvas.geometry import Box, Point, Transform, inverse_map_box
from sharedcanvas.graph import Graph, serialize
from sharedcanvas.model import Annotation, Canvas, Constraint, ForeignNode, Manifest, Ref, Sequence

ANGLE = 3.0
ORIGIN = (0.0, 0.0)
# (x, y, w, h) in the deskewed frame
LINE_BOXES = [
    (120.0, 80.0, 760.0, 40.0),
    (120.0, 140.0, 760.0, 40.0),
    (140.0, 200.0, 700.0, 38.0),
]
LINE_TEXTS = [
    "Aen den heer gouverneur generael",
    "mitsgaders den raedt van Indien",
    "tot Batavia, per het schip de Eendracht",
]

CANVAS = "urn:rl:canvas:p1"


def path_for(box: Box, transform: Transform) -> str:
    poly = inverse_map_box(box, transform)
    coords = " L ".join(f"{v.x!r} {v.y!r}" for v in poly.vertices)
    return f"M {coords} Z"


def build() -> Graph:
    transform = Transform(ANGLE, Point(*ORIGIN))
    graph = Graph()

    def add(node):
        graph.nodes[node.id] = node

    add(Canvas(id=CANVAS, label="Deskewed page", height=700.0, width=1000.0))
    constraint_ids = []
    line_ids = []
    for i, (box, chars) in enumerate(zip(LINE_BOXES, LINE_TEXTS), start=1):
        con_id = f"urn:rl:con:line{i}"
        text_id = f"urn:rl:text:line{i}"
        anno_id = f"urn:rl:anno:line{i}"
        constraint_ids.append(con_id)
        line_ids.append(anno_id)
        add(Constraint(id=con_id, form="svg-path", path=path_for(Box(*box), transform)))
        add(ForeignNode(id=text_id, type="Text", properties={"chars": chars}))
        add(
            Annotation(
                id=anno_id,
                kind="text",
                body=Ref(resource=text_id),
                targets=(Ref(resource=CANVAS, constraint=con_id, id=f"urn:rl:seg:line{i}"),),
            )
        )
    add(
        ForeignNode(
            id="urn:rl:frame-note",
            type="RotatedFrameNote",
            properties={
                "angle": ANGLE,
                "origin": list(ORIGIN),
                "boxes": [list(b) for b in LINE_BOXES],
                "constraints": constraint_ids,
                "lines": line_ids,
            },
        )
    )
    add(Sequence(id="urn:rl:seq:page", canvases=(CANVAS,)))
    add(
        Manifest(
            id="urn:rl:manifest",
            sequences=("urn:rl:seq:page",),
            discovery=(),
            metadata={"title": "Line boxes published from a deskewed frame"},
        )
    )
    return graph


def main() -> None:
    out = Path(__file__).resolve().parent.parent / "fixtures" / "rotated_line_boxes.scx"
    out.write_bytes(serialize(build()))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
