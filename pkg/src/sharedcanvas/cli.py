"""Command-line entry point.

    sc validate [--strict] <paths...>
    sc flatten --canvas <uri> [--sequence <uri>] [--select k=v ...] [--format scx|svg] <paths...>
    sc align --canvas <uri> --region <spec> [--min-fraction f] <paths...>
    sc serve [--port N] [--allow-remote] <paths...>

Exit codes are a stable scripting contract: 0 success, 1 domain errors,
2 usage or parse errors. SC_FETCH_ALLOWLIST (comma-separated URI
prefixes) gates remote fetching when --allow-remote is set.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import urllib.request
from pathlib import Path

from .geometry import GeometryError, SvgPathError, parse_svg_path, rect
from .graph import FetchPlan, FetchError, Graph, MergeConflictError, ScxParseError, fetch_closure
from .layout import build_layout, layout_scx, layout_svg
from .resolver import ResolverError, align, canvas_order
from .service import make_server, parse_selection, ServiceError
from .validation import validate_graph


_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:")


def _make_fetcher(base_dir: Path, allow_remote: bool):
    allowlist = [p for p in os.environ.get("SC_FETCH_ALLOWLIST", "").split(",") if p]

    def fetcher(source: str) -> bytes | None:
        if source.startswith("http://") or source.startswith("https://"):
            if not allow_remote or not any(source.startswith(prefix) for prefix in allowlist):
                return None
            with urllib.request.urlopen(source) as response:
                return response.read()
        if source.startswith("file:"):
            path = Path(source[len("file:"):])
            if not path.is_absolute():
                path = base_dir / path
            return path.read_bytes()
        if _SCHEME.match(source) and not Path(source).exists():
            return None  # urn: and friends are identifiers, not locations
        return Path(source).read_bytes()

    return fetcher


def _load(paths: list[str], allow_remote: bool = False) -> Graph:
    base_dir = Path(paths[0]).resolve().parent if paths else Path.cwd()
    plan = FetchPlan(roots=tuple(paths), allow_remote=allow_remote)
    return fetch_closure(plan, _make_fetcher(base_dir, allow_remote))


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        graph = _load(args.paths)
    except (ScxParseError, FetchError) as exc:
        print(f"PARSE {exc}", file=sys.stderr)
        return 2
    except MergeConflictError as exc:
        print(f"ERROR E_CONFLICT {exc.node_id} {exc}")
        print("1 errors, 0 warnings")
        return 1
    findings = validate_graph(graph)
    for f in findings:
        print(f"{f.severity.upper()} {f.code} {f.node} {f.message}")
    errors = sum(1 for f in findings if f.severity == "error")
    warnings = len(findings) - errors
    print(f"{errors} errors, {warnings} warnings")
    if errors or (args.strict and warnings):
        return 1
    return 0


def _parse_selects(pairs: list[str]) -> dict[str, str]:
    try:
        return parse_selection(pairs)
    except ServiceError as exc:
        raise SystemExit(_usage_error(str(exc)))


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _cmd_flatten(args: argparse.Namespace) -> int:
    selection = _parse_selects(args.select)
    try:
        graph = _load(args.paths)
    except (ScxParseError, FetchError) as exc:
        return _usage_error(str(exc))
    except MergeConflictError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.sequence is not None and args.canvas not in canvas_order(graph, args.sequence):
            print(f"error: {args.canvas} is not in sequence {args.sequence}", file=sys.stderr)
            return 1
        layout = build_layout(graph, args.canvas, selection)
    except (ResolverError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.format == "svg":
        sys.stdout.write(layout_svg(layout, graph))
    else:
        sys.stdout.write(layout_scx(layout, graph).decode("utf-8"))
    return 0


def _parse_region(spec: str):
    spec = spec.strip()
    if spec.startswith("M"):
        return parse_svg_path(spec)
    parts = spec.split(",")
    if len(parts) != 4:
        raise ValueError("region must be 'x,y,w,h' or an SVG path")
    x, y, w, h = (float(p) for p in parts)
    return rect(x, y, w, h)


def _cmd_align(args: argparse.Namespace) -> int:
    try:
        region = _parse_region(args.region)
    except (ValueError, SvgPathError, GeometryError) as exc:
        return _usage_error(f"bad region: {exc}")
    selection = _parse_selects(args.select)
    try:
        graph = _load(args.paths)
    except (ScxParseError, FetchError) as exc:
        return _usage_error(str(exc))
    except MergeConflictError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        hits = align(graph, args.canvas, region, selection, args.min_fraction)
    except (ResolverError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not hits:
        print("no hits")
        return 0
    for hit in hits:
        layer = hit.layer if hit.layer is not None else "-"
        print(f"{layer} {hit.annotation} {hit.overlap_fraction:.6f} {hit.overlap_area:.6f}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    try:
        graph = _load(args.paths, allow_remote=args.allow_remote)
    except (ScxParseError, FetchError) as exc:
        return _usage_error(str(exc))
    except MergeConflictError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    server = make_server(graph, port=args.port)
    host, port = server.server_address[:2]
    print(f"serving {len(graph.nodes)} nodes on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sc", description="manuscript layout graph toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse, merge, and check graphs")
    p.add_argument("--strict", action="store_true", help="treat warnings as failures")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("flatten", help="emit the flattened layout of one canvas")
    p.add_argument("--canvas", required=True)
    p.add_argument("--sequence")
    p.add_argument("--select", action="append", default=[], metavar="CHOICE=OPTION")
    p.add_argument("--format", choices=("scx", "svg"), default="scx")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=_cmd_flatten)

    p = sub.add_parser("align", help="find annotations overlapping a region")
    p.add_argument("--canvas", required=True)
    p.add_argument("--region", required=True, help="'x,y,w,h' or an SVG path")
    p.add_argument("--min-fraction", type=float, default=0.0)
    p.add_argument("--select", action="append", default=[], metavar="CHOICE=OPTION")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=_cmd_align)

    p = sub.add_parser("serve", help="serve layouts and alignment over HTTP")
    p.add_argument("--port", type=int, default=8077)
    p.add_argument("--allow-remote", action="store_true")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
