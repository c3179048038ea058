"""Planar math for canvas layouts.

All of it works in screen coordinates: origin at the top-left corner,
x rightward, y downward, angles in degrees turning clockwise. That is
the convention page scans and their segment descriptions use, so no
sign juggling happens anywhere else in the package.

Polygons are stored with non-negative shoelace sign, which in y-down
coordinates means visually clockwise vertex order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable

from .model import Constraint, Finding


class GeometryError(Exception):
    """A geometric input the library cannot work with."""

    def __init__(self, message: str, code: str = "E_GEOMETRY"):
        super().__init__(message)
        self.code = code


class SvgPathError(GeometryError):
    """Path text outside the supported subset, or not a usable polygon."""


class NotSpatialError(GeometryError):
    """A text-offset constraint was used where spatial geometry is needed."""

    def __init__(self, message: str):
        super().__init__(message, code="E_NOT_SPATIAL")


@dataclass(frozen=True)
class Point:
    x: float
    y: float


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle given by top-left corner and size."""

    x: float
    y: float
    w: float
    h: float

    def corners(self) -> tuple[Point, Point, Point, Point]:
        return (
            Point(self.x, self.y),
            Point(self.x + self.w, self.y),
            Point(self.x + self.w, self.y + self.h),
            Point(self.x, self.y + self.h),
        )


@dataclass(frozen=True)
class Polygon:
    """Simple polygon, implicitly closed, clockwise in y-down space."""

    vertices: tuple[Point, ...]


@dataclass(frozen=True)
class Transform:
    """Clockwise rotation by ``angle`` degrees about ``origin``.

    Maps (x, y) to
    ``(ox + dx*cos - dy*sin, oy + dx*sin + dy*cos)`` with dx = x - ox,
    dy = y - oy and the angle converted to radians.
    """

    angle: float
    origin: Point = Point(0.0, 0.0)

    def inverse(self) -> Transform:
        return Transform(-self.angle, self.origin)


def _signed_area2(vertices: Iterable[Point]) -> float:
    """Twice the shoelace signed area; positive for our normal orientation."""
    vs = list(vertices)
    total = 0.0
    for a, b in zip(vs, vs[1:] + vs[:1]):
        total += a.x * b.y - b.x * a.y
    return total


def _orient(a: Point, b: Point, c: Point) -> float:
    """Cross product of ab with ac; > 0 when c lies to the interior side
    of a clockwise-ordered boundary edge ab."""
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def _dedup(points: list[Point]) -> list[Point]:
    out: list[Point] = []
    for p in points:
        if not out or p != out[-1]:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def _cross_tolerance(vertices: Iterable[Point]) -> float:
    scale = max((max(abs(p.x), abs(p.y)) for p in vertices), default=1.0)
    return 1e-12 * max(1.0, scale * scale)


def is_simple(vertices: list[Point]) -> bool:
    """No two non-adjacent edges intersect or touch."""
    n = len(vertices)
    for i in range(n):
        a1, a2 = vertices[i], vertices[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_touch(a1, a2, vertices[j], vertices[(j + 1) % n]):
                return False
    return True


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    # collinearity assumed by the caller
    return (
        min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def _segments_touch(p1: Point, p2: Point, p3: Point, p4: Point) -> bool:
    d1 = _orient(p3, p4, p1)
    d2 = _orient(p3, p4, p2)
    d3 = _orient(p1, p2, p3)
    d4 = _orient(p1, p2, p4)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True
    # endpoint / collinear contact
    if d1 == 0 and _on_segment(p3, p4, p1):
        return True
    if d2 == 0 and _on_segment(p3, p4, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, p3):
        return True
    if d4 == 0 and _on_segment(p1, p2, p4):
        return True
    return False


def polygon(points: Iterable[Point], check: bool = True) -> Polygon:
    """Build a normalized Polygon from vertices.

    Drops repeated consecutive points and an explicit closing point,
    requires at least 3 distinct vertices, optionally verifies
    simplicity, and normalizes the orientation (first vertex kept).
    """
    vs = _dedup([p if isinstance(p, Point) else Point(*p) for p in points])
    if len(vs) < 3:
        raise GeometryError("polygon needs at least 3 distinct vertices", code="E_DEGENERATE")
    if check and not is_simple(vs):
        raise GeometryError("polygon is self-intersecting", code="E_NOT_SIMPLE")
    if _signed_area2(vs) < 0:
        vs = [vs[0]] + vs[:0:-1]
    return Polygon(tuple(vs))


def rect(x: float, y: float, w: float, h: float) -> Polygon:
    """Axis-aligned rectangle polygon; w and h must be positive."""
    if not (w > 0 and h > 0):
        raise GeometryError("rectangle needs positive width and height", code="E_NONPOSITIVE_DIMENSION")
    return Polygon(Box(x, y, w, h).corners())


def bounds(p: Polygon) -> tuple[float, float, float, float]:
    xs = [v.x for v in p.vertices]
    ys = [v.y for v in p.vertices]
    return min(xs), min(ys), max(xs), max(ys)


def bounding_box(p: Polygon) -> Box:
    x0, y0, x1, y1 = bounds(p)
    return Box(x0, y0, x1 - x0, y1 - y0)


def polygon_area(p: Polygon) -> float:
    """Absolute shoelace area."""
    return abs(_signed_area2(p.vertices)) / 2.0


def apply_transform(t: Transform, p: Point) -> Point:
    theta = math.radians(t.angle)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    dx, dy = p.x - t.origin.x, p.y - t.origin.y
    return Point(
        t.origin.x + dx * cos_t - dy * sin_t,
        t.origin.y + dx * sin_t + dy * cos_t,
    )


def transform_polygon(t: Transform, p: Polygon) -> Polygon:
    # rigid motion: simplicity and orientation are preserved
    return Polygon(tuple(apply_transform(t, v) for v in p.vertices))


def inverse_map_box(box: Box, t: Transform) -> Polygon:
    """Map a box authored in the rotated frame of ``t`` back to base coordinates.

    The four corners go through the inverse rotation and come back as a
    quadrilateral; re-applying ``t`` to its vertices recovers the box
    corners. Working in an internally rotated frame (e.g. a line-detection
    pass over a deskewed image) and publishing polygons in the original
    frame is exactly this operation.
    """
    inv = t.inverse()
    return Polygon(tuple(apply_transform(inv, c) for c in box.corners()))


_NUMBER = r"[-+]?(?:[0-9]*\.[0-9]+|[0-9]+\.?)(?:[eE][-+]?[0-9]+)?"
_TOKEN = re.compile(rf"({_NUMBER})|([A-Za-z])|(\S)")


def _tokenize_path(d: str) -> list[object]:
    tokens: list[object] = []
    for number, letter, junk in _TOKEN.findall(d.replace(",", " ")):
        if number:
            tokens.append(float(number))
        elif letter:
            tokens.append(letter)
        else:
            raise SvgPathError(f"unexpected character {junk!r} in path", code="E_SVG_SYNTAX")
    return tokens


def parse_svg_path(d: str) -> Polygon:
    """Parse the supported path subset into a polygon.

    Supported: one subpath of absolute ``M``/``L`` commands with an
    optional closing ``Z`` (implicit coordinate pairs after M or L are
    allowed, as in the SVG grammar). Anything else, including curves,
    relative commands, and second subpaths, is rejected.
    """
    tokens = _tokenize_path(d)
    if not tokens:
        raise SvgPathError("empty path", code="E_SVG_SYNTAX")
    if tokens[0] != "M":
        raise SvgPathError("path must start with an absolute M command", code="E_SVG_UNSUPPORTED")
    points: list[Point] = []
    closed = False
    i = 1
    expecting_pair = True  # M must be followed by at least one pair
    while i < len(tokens):
        tok = tokens[i]
        if isinstance(tok, float):
            if closed:
                raise SvgPathError("content after Z", code="E_SVG_SYNTAX")
            if i + 1 >= len(tokens) or not isinstance(tokens[i + 1], float):
                raise SvgPathError("coordinate pair is incomplete", code="E_SVG_SYNTAX")
            points.append(Point(tok, tokens[i + 1]))
            expecting_pair = False
            i += 2
            continue
        if expecting_pair:
            raise SvgPathError("command is missing its coordinates", code="E_SVG_SYNTAX")
        if closed:
            if tok == "M":
                raise SvgPathError("multiple subpaths are not supported", code="E_SVG_UNSUPPORTED")
            raise SvgPathError(f"content after Z: {tok!r}", code="E_SVG_SYNTAX")
        if tok == "L":
            expecting_pair = True
        elif tok in ("Z", "z"):
            closed = True
        elif tok == "M":
            raise SvgPathError("multiple subpaths are not supported", code="E_SVG_UNSUPPORTED")
        else:
            raise SvgPathError(f"unsupported path command {tok!r}", code="E_SVG_UNSUPPORTED")
        i += 1
    if expecting_pair:
        raise SvgPathError("command is missing its coordinates", code="E_SVG_SYNTAX")
    vs = _dedup(points)
    if len(vs) < 3:
        raise SvgPathError("path has fewer than 3 distinct vertices", code="E_DEGENERATE")
    if not is_simple(vs):
        raise SvgPathError("path polygon is self-intersecting", code="E_NOT_SIMPLE")
    return polygon(vs, check=False)


def resolve_constraint(
    c: Constraint,
    target_w: float,
    target_h: float,
    findings: list[Finding] | None = None,
) -> Polygon:
    """Resolve a spatial constraint against a target of the given size.

    Pixel boxes are placed as-is; percent boxes scale with the target so
    one constraint describes the same relative region on differently
    sized targets; svg paths are already in absolute units. Vertices
    outside the target rectangle are legal (inverse-rotated boxes poke
    past edges) and only produce a warning when a findings sink is given.
    """
    if not (target_w > 0 and target_h > 0):
        raise GeometryError("target dimensions must be positive", code="E_NONPOSITIVE_DIMENSION")
    if c.form == "text-offset":
        raise NotSpatialError(f"constraint {c.id} is a text segment, not a spatial one")
    if c.form == "box":
        if c.unit not in ("pixel", "percent") or None in (c.x, c.y, c.w, c.h):
            raise GeometryError(f"box constraint {c.id} is incomplete", code="E_CONSTRAINT_FORM")
        if c.unit == "percent":
            poly = rect(
                c.x * target_w / 100.0,
                c.y * target_h / 100.0,
                c.w * target_w / 100.0,
                c.h * target_h / 100.0,
            )
        else:
            poly = rect(c.x, c.y, c.w, c.h)
    elif c.form == "svg-path":
        if c.path is None:
            raise GeometryError(f"svg-path constraint {c.id} has no path", code="E_CONSTRAINT_FORM")
        poly = parse_svg_path(c.path)
    else:
        raise GeometryError(f"constraint {c.id} has unusable form {c.form!r}", code="E_CONSTRAINT_FORM")
    if findings is not None:
        eps = 1e-9
        if any(
            v.x < -eps or v.y < -eps or v.x > target_w + eps or v.y > target_h + eps
            for v in poly.vertices
        ):
            findings.append(
                Finding("warning", "W_OUT_OF_BOUNDS", c.id, "resolved region extends outside the target")
            )
    return poly


def is_convex(p: Polygon) -> bool:
    vs = p.vertices
    tol = _cross_tolerance(vs)
    n = len(vs)
    return all(_orient(vs[i], vs[(i + 1) % n], vs[(i + 2) % n]) >= -tol for i in range(n))


def _point_strictly_inside_triangle(p: Point, a: Point, b: Point, c: Point, tol: float) -> bool:
    return (
        _orient(a, b, p) > tol
        and _orient(b, c, p) > tol
        and _orient(c, a, p) > tol
    )


def triangulate(p: Polygon) -> list[tuple[Point, Point, Point]]:
    """Ear-clipping triangulation of a simple polygon."""
    vs = p.vertices
    tol = _cross_tolerance(vs)
    idx = list(range(len(vs)))
    tris: list[tuple[Point, Point, Point]] = []
    while len(idx) > 3:
        for k in range(len(idx)):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % len(idx)]
            a, b, c = vs[i0], vs[i1], vs[i2]
            if _orient(a, b, c) < -tol:
                continue  # reflex corner, not an ear
            if any(
                _point_strictly_inside_triangle(vs[m], a, b, c, tol)
                for m in idx
                if m not in (i0, i1, i2)
            ):
                continue
            tris.append((a, b, c))
            del idx[k]
            break
        else:
            raise GeometryError("cannot triangulate polygon", code="E_NOT_SIMPLE")
    tris.append((vs[idx[0]], vs[idx[1]], vs[idx[2]]))
    return tris


def _line_intersection(s: Point, e: Point, a: Point, b: Point) -> Point:
    dc = Point(a.x - b.x, a.y - b.y)
    dp = Point(s.x - e.x, s.y - e.y)
    denom = dc.x * dp.y - dc.y * dp.x
    if denom == 0:
        return e
    n1 = a.x * b.y - a.y * b.x
    n2 = s.x * e.y - s.y * e.x
    return Point((n1 * dp.x - n2 * dc.x) / denom, (n1 * dp.y - n2 * dc.y) / denom)


def _clip_by_convex(subject: Iterable[Point], clip: Polygon) -> list[Point]:
    """Sutherland-Hodgman clip of a subject polygon by a convex window."""
    output = list(subject)
    cvs = clip.vertices
    for i in range(len(cvs)):
        e1, e2 = cvs[i], cvs[(i + 1) % len(cvs)]
        if not output:
            return []
        input_list, output = output, []
        s = input_list[-1]
        for v in input_list:
            v_in = _orient(e1, e2, v) >= 0
            s_in = _orient(e1, e2, s) >= 0
            if v_in:
                if not s_in:
                    output.append(_line_intersection(s, v, e1, e2))
                output.append(v)
            elif s_in:
                output.append(_line_intersection(s, v, e1, e2))
            s = v
    return output


def intersection_area(a: Polygon, b: Polygon) -> float:
    """Area of the intersection of two simple polygons.

    Convex pairs are clipped directly, which is exact; non-convex inputs
    are decomposed into triangles first, so each clip stays convex/convex.
    Degenerate contact (shared edges or points) contributes zero.
    """
    ax0, ay0, ax1, ay1 = bounds(a)
    bx0, by0, bx1, by1 = bounds(b)
    if ax1 <= bx0 or bx1 <= ax0 or ay1 <= by0 or by1 <= ay0:
        return 0.0
    parts_a = [a.vertices] if is_convex(a) else [t for t in triangulate(a)]
    parts_b = [b] if is_convex(b) else [Polygon(t) for t in triangulate(b)]
    total = 0.0
    for pa in parts_a:
        for pb in parts_b:
            out = _clip_by_convex(pa, pb)
            if len(out) >= 3:
                total += abs(_signed_area2(out)) / 2.0
    return total


PointMapper = Callable[[Point], Point]
