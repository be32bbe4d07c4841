"""Convex hulls and minimum-area rotated rectangles."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from textkernel.core.errors import DataFormatError
from textkernel.geometry.polygon import Point, Polygon


@dataclass(frozen=True)
class RotatedRect:
    """Rectangle given by center, size and rotation in degrees, within [-45, 45)."""

    center: Point
    size: Tuple[float, float]
    angle: float

    @property
    def area(self) -> float:
        return self.size[0] * self.size[1]

    def corners(self) -> np.ndarray:
        """Four corners, clockwise on screen, starting at the (-w/2, -h/2) corner."""

        theta = math.radians(self.angle)
        axis_u = np.array([math.cos(theta), math.sin(theta)])
        axis_v = np.array([-math.sin(theta), math.cos(theta)])
        half_w, half_h = self.size[0] / 2.0, self.size[1] / 2.0
        center = np.asarray(self.center, dtype=np.float64)
        signs = ((-1, -1), (1, -1), (1, 1), (-1, 1))
        return np.array([center + su * half_w * axis_u + sv * half_h * axis_v for su, sv in signs])

    def to_polygon(self) -> Polygon:
        return Polygon.from_points(self.corners().tolist())


def convex_hull(points: Iterable[Sequence[float]]) -> List[Point]:
    """Andrew's monotone chain; returns the hull counter-clockwise in math axes."""

    unique = sorted({(float(x), float(y)) for x, y in points})
    if len(unique) <= 2:
        return unique

    def cross(o: Point, a: Point, b: Point) -> float:
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: List[Point] = []
    for point in unique:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], point) <= 0:
            lower.pop()
        lower.append(point)
    upper: List[Point] = []
    for point in reversed(unique):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], point) <= 0:
            upper.pop()
        upper.append(point)
    return lower[:-1] + upper[:-1]


def _normalize(angle: float, width: float, height: float) -> tuple[float, float, float]:
    """Fold an edge angle into [-45, 45), swapping sides for every quarter turn."""

    angle = math.fmod(angle, 180.0)
    if angle < -45.0:
        angle += 180.0
    while angle >= 45.0:
        angle -= 90.0
        width, height = height, width
    if abs(angle) < 1e-9:
        angle = 0.0
    return angle, width, height


def min_area_rect(points: Iterable[Sequence[float]]) -> RotatedRect:
    """Smallest enclosing rectangle; one side is collinear with a hull edge."""

    hull = convex_hull(points)
    if not hull:
        raise DataFormatError("min_area_rect needs at least one point.")
    if len(hull) == 1:
        return RotatedRect(center=hull[0], size=(0.0, 0.0), angle=0.0)

    pts = np.asarray(hull, dtype=np.float64)
    edges = np.roll(pts, -1, axis=0) - pts
    if len(hull) == 2:
        edges = edges[:1]

    best: tuple[float, float, float, float, float, float] | None = None
    for dx, dy in edges:
        length = math.hypot(dx, dy)
        if length == 0.0:
            continue
        u = np.array([dx, dy]) / length
        v = np.array([-u[1], u[0]])
        along = pts @ u
        across = pts @ v
        width = float(along.max() - along.min())
        height = float(across.max() - across.min())
        area = width * height
        if best is None or area < best[0] - 1e-9:
            mid_u = (along.max() + along.min()) / 2.0
            mid_v = (across.max() + across.min()) / 2.0
            center = mid_u * u + mid_v * v
            angle = math.degrees(math.atan2(u[1], u[0]))
            best = (area, float(center[0]), float(center[1]), angle, width, height)

    assert best is not None
    _, cx, cy, angle, width, height = best
    angle, width, height = _normalize(angle, width, height)
    return RotatedRect(center=(cx, cy), size=(width, height), angle=angle)


__all__ = ["RotatedRect", "convex_hull", "min_area_rect"]
