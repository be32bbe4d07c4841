"""Polygons, pixel-center rasterization and mask IoU."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from textkernel.core.errors import DataFormatError, require_same_shape

Point = Tuple[float, float]


class DegeneratePolygonError(DataFormatError):
    """Raised for polygons with fewer than three distinct points or zero area."""


@dataclass(frozen=True)
class Polygon:
    """Closed polygon in pixel coordinates; the last point connects to the first."""

    points: Tuple[Point, ...]

    def __post_init__(self) -> None:
        pts = tuple((float(x), float(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if not all(math.isfinite(v) for point in pts for v in point):
            raise DegeneratePolygonError("Polygon coordinates must be finite.")
        for first, second in zip(pts, pts[1:] + pts[:1]):
            if first == second:
                raise DegeneratePolygonError(f"Polygon repeats consecutive point {first}.")
        if len(set(pts)) < 3:
            raise DegeneratePolygonError("Polygon needs at least 3 distinct points.")
        if self.area == 0.0:
            raise DegeneratePolygonError("Polygon has zero area (collinear points).")

    @classmethod
    def from_points(cls, points: Iterable[Sequence[float]]) -> "Polygon":
        """Build a polygon, dropping consecutive duplicates and a repeated closing point."""

        cleaned: list[Point] = []
        for x, y in points:
            point = (float(x), float(y))
            if cleaned and cleaned[-1] == point:
                continue
            cleaned.append(point)
        while len(cleaned) > 1 and cleaned[0] == cleaned[-1]:
            cleaned.pop()
        return cls(tuple(cleaned))

    @property
    def signed_area(self) -> float:
        xs, ys = self.as_array().T
        return 0.5 * float(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1)))

    @property
    def area(self) -> float:
        return abs(self.signed_area)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        xs, ys = self.as_array().T
        return float(xs.min()), float(ys.min()), float(xs.max()), float(ys.max())

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.float64)

    def scaled(self, sx: float, sy: float) -> "Polygon":
        return Polygon.from_points((x * sx, y * sy) for x, y in self.points)

    def flat_coordinates(self) -> list[float]:
        return [value for point in self.points for value in point]


def rasterize_polygon(poly: Polygon, width: int, height: int) -> np.ndarray:
    """Fill ``poly`` on a ``height`` x ``width`` grid.

    A pixel is set iff its center ``(col + 0.5, row + 0.5)`` lies inside the
    polygon under the even-odd rule. Edges use the half-open row rule
    ``ymin <= yc < ymax`` so shared vertices are counted once.
    """

    if width < 1 or height < 1:
        raise ValueError(f"Raster size must be positive, got {width}x{height}.")
    if not isinstance(poly, Polygon):
        poly = Polygon.from_points(poly)

    pts = poly.as_array()
    x0, y0 = pts[:, 0], pts[:, 1]
    nxt = np.roll(pts, -1, axis=0)
    x1, y1 = nxt[:, 0], nxt[:, 1]
    sloped = y0 != y1
    x0, y0, x1, y1 = x0[sloped], y0[sloped], x1[sloped], y1[sloped]

    centers = np.arange(height, dtype=np.float64) + 0.5
    low = np.minimum(y0, y1)[:, None]
    high = np.maximum(y0, y1)[:, None]
    edge_idx, row_idx = np.nonzero((centers >= low) & (centers < high))

    crossings = x0[edge_idx] + (centers[row_idx] - y0[edge_idx]) * (
        (x1[edge_idx] - x0[edge_idx]) / (y1[edge_idx] - y0[edge_idx])
    )
    # Every crossing flips the parity of all pixel centers to its left.
    cut = np.clip(np.ceil(crossings - 0.5), 0, width).astype(np.intp)
    toggles = np.zeros((height, width + 1), dtype=np.int32)
    np.add.at(toggles, (row_idx, np.zeros_like(row_idx)), 1)
    np.add.at(toggles, (row_idx, cut), 1)
    return (np.cumsum(toggles[:, :width], axis=1) & 1).astype(bool)


def mask_iou(a: np.ndarray, b: np.ndarray) -> float:
    """Intersection over union of two equally sized masks; 1.0 when both are empty."""

    require_same_shape(a, b, names=("a", "b"))
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    union = int(np.count_nonzero(a | b))
    if union == 0:
        return 1.0
    return int(np.count_nonzero(a & b)) / union


__all__ = [
    "Point",
    "Polygon",
    "DegeneratePolygonError",
    "rasterize_polygon",
    "mask_iou",
]
