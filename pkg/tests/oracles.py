"""Independent numeric oracles for geometry tests.

These deliberately avoid the library's clipping and shoelace code paths:
areas come from counting sample points or grid cells against numpy
half-plane / ray-casting membership tests.
"""

from __future__ import annotations

import math
import random

import numpy as np

from sharedcanvas.geometry import Point, Polygon, polygon


def _vertex_arrays(poly: Polygon) -> tuple[np.ndarray, np.ndarray]:
    xs = np.array([v.x for v in poly.vertices])
    ys = np.array([v.y for v in poly.vertices])
    return xs, ys


def points_in_convex(px: np.ndarray, py: np.ndarray, poly: Polygon) -> np.ndarray:
    """Membership mask: inside iff on one consistent side of every edge.

    Checks both windings so it makes no assumption about vertex order.
    """
    xs, ys = _vertex_arrays(poly)
    nx, ny = np.roll(xs, -1), np.roll(ys, -1)
    non_negative = np.ones(px.shape, dtype=bool)
    non_positive = np.ones(px.shape, dtype=bool)
    for x0, y0, x1, y1 in zip(xs, ys, nx, ny):
        cross = (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)
        non_negative &= cross >= 0
        non_positive &= cross <= 0
    return non_negative | non_positive


def points_in_simple(px: np.ndarray, py: np.ndarray, poly: Polygon) -> np.ndarray:
    """Crossing-number (ray cast) membership for arbitrary simple polygons."""
    xs, ys = _vertex_arrays(poly)
    nx, ny = np.roll(xs, -1), np.roll(ys, -1)
    inside = np.zeros(px.shape, dtype=bool)
    for x0, y0, x1, y1 in zip(xs, ys, nx, ny):
        crosses = (y0 > py) != (y1 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_at = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
        inside ^= crosses & (px < np.where(crosses, x_at, np.inf))
    return inside


def mc_intersection_area(
    a: Polygon,
    b: Polygon,
    samples: int,
    rng: np.random.Generator,
    membership=points_in_convex,
) -> float:
    """Monte-Carlo estimate of area(a ∩ b).

    Samples are drawn over the intersection of the two bounding boxes,
    which contains the true intersection and is computable from the
    inputs alone. ``membership`` must suit the inputs: the half-plane
    test for convex polygons, ray casting for arbitrary simple ones.
    """
    ax, ay = _vertex_arrays(a)
    bx, by = _vertex_arrays(b)
    x0, x1 = max(ax.min(), bx.min()), min(ax.max(), bx.max())
    y0, y1 = max(ay.min(), by.min()), min(ay.max(), by.max())
    if x0 >= x1 or y0 >= y1:
        return 0.0
    px = rng.uniform(x0, x1, samples)
    py = rng.uniform(y0, y1, samples)
    hit = membership(px, py, a) & membership(px, py, b)
    return hit.mean() * (x1 - x0) * (y1 - y0)


def raster_area(poly: Polygon, cells: int = 2000) -> float:
    """Grid-cell count area estimate over the polygon's bounding box."""
    xs, ys = _vertex_arrays(poly)
    x0, x1, y0, y1 = xs.min(), xs.max(), ys.min(), ys.max()
    cx = np.linspace(x0, x1, cells, endpoint=False) + (x1 - x0) / (2 * cells)
    cy = np.linspace(y0, y1, cells, endpoint=False) + (y1 - y0) / (2 * cells)
    gx, gy = np.meshgrid(cx, cy)
    inside = points_in_simple(gx.ravel(), gy.ravel(), poly)
    cell_area = ((x1 - x0) / cells) * ((y1 - y0) / cells)
    return inside.sum() * cell_area


def random_convex_polygon(rng: random.Random, sides: int | None = None) -> Polygon:
    """Convex polygon from jittered points on a circle near the origin.

    Jittered regular angles keep the gaps bounded, so the polygon always
    contains a disk of radius about half its circumradius; that keeps
    randomly drawn pairs overlapping.
    """
    n = sides or rng.randint(5, 9)
    radius = rng.uniform(4.0, 8.0)
    cx, cy = rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)
    points = []
    for i in range(n):
        angle = 2 * math.pi * i / n + rng.uniform(0, 0.8 * 2 * math.pi / n)
        points.append(Point(cx + radius * math.cos(angle), cy + radius * math.sin(angle)))
    return polygon(points)


def random_star_polygon(rng: random.Random, sides: int | None = None) -> Polygon:
    """Star-shaped (hence simple) polygon with wobbly radii; usually non-convex."""
    n = sides or rng.randint(6, 12)
    cx, cy = rng.uniform(-2, 2), rng.uniform(-2, 2)
    points = []
    for i in range(n):
        angle = 2 * math.pi * i / n + rng.uniform(0, 0.5 * 2 * math.pi / n)
        radius = rng.uniform(2.0, 9.0)
        points.append(Point(cx + radius * math.cos(angle), cy + radius * math.sin(angle)))
    return polygon(points)
