#!/usr/bin/env python3
"""Walk through the three-layer letter fixture from the command line.

Paints the page, then simulates clicking each transcription line:
aligns on the line's region and prints which segments light up in the
other layers. This is the same query the viewer issues per click.

    python3 scripts/demo_alignment.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from sharedcanvas.geometry import bounding_box
from sharedcanvas.graph import parse_manifest
from sharedcanvas.model import Layer
from sharedcanvas.resolver import align, paint

CANVAS = "urn:sl:canvas:p1"


def main() -> None:
    path = ROOT / "fixtures" / "three_layer_alignment.scx"
    graph = parse_manifest(path.read_bytes(), source=str(path))
    labels = {layer.id: layer.label for layer in graph.by_type(Layer)}

    paintings = paint(graph, CANVAS)
    print(f"{len(paintings)} paintings on {CANVAS}:")
    for p in paintings:
        box = bounding_box(p.region)
        print(f"  z{p.z_order:<2} [{labels.get(p.layer, '-'):<24}] {p.annotation}  at ({box.x:g},{box.y:g}) {box.w:g}x{box.h:g}")

    lines = [p for p in paintings if "anno:line" in p.annotation]
    for line in lines:
        print(f"\nclick {line.annotation}:")
        for hit in align(graph, CANVAS, line.region):
            if hit.annotation == line.annotation:
                continue
            print(
                f"  -> {labels.get(hit.layer, '-'):<24} {hit.annotation}"
                f"  overlap {hit.overlap_fraction:.0%} of the line"
            )


if __name__ == "__main__":
    main()
