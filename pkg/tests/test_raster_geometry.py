"""Tests for polygons, rasterization and mask IoU."""
from __future__ import annotations

import math

import numpy as np
import pytest

from textkernel.geometry.polygon import DegeneratePolygonError, Polygon, mask_iou, rasterize_polygon


def _build_star(rng: np.random.Generator, width: int, height: int) -> Polygon:
    count = int(rng.integers(3, 12))
    angles = np.sort(rng.uniform(0, 2 * math.pi, size=count))
    radii = rng.uniform(2.0, min(width, height) / 2.0 - 1.0, size=count)
    cx, cy = rng.uniform(width * 0.3, width * 0.7), rng.uniform(height * 0.3, height * 0.7)
    return Polygon.from_points(zip(cx + radii * np.cos(angles), cy + radii * np.sin(angles)))


def _even_odd_oracle(poly: Polygon, width: int, height: int) -> np.ndarray:
    pts = poly.points
    mask = np.zeros((height, width), dtype=bool)
    for row in range(height):
        yc = row + 0.5
        for col in range(width):
            xc = col + 0.5
            inside = False
            for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
                if (y0 > yc) != (y1 > yc):
                    cross = x0 + (yc - y0) * (x1 - x0) / (y1 - y0)
                    if xc < cross:
                        inside = not inside
            mask[row, col] = inside
    return mask


def test_rasterize_axis_aligned_rectangle() -> None:
    poly = Polygon.from_points([(0, 0), (10, 0), (10, 5), (0, 5)])

    mask = rasterize_polygon(poly, 12, 8)

    assert mask.sum() == 50
    assert mask[:5, :10].all()
    assert not mask[5:, :].any()
    assert not mask[:, 10:].any()


def test_rasterize_matches_point_in_polygon_oracle(rng: np.random.Generator) -> None:
    for _ in range(40):
        width, height = int(rng.integers(8, 30)), int(rng.integers(8, 30))
        poly = _build_star(rng, width, height)

        assert np.array_equal(rasterize_polygon(poly, width, height), _even_odd_oracle(poly, width, height))


def test_rasterize_self_intersecting_uses_even_odd() -> None:
    bowtie = Polygon.from_points([(0.3, 0.1), (9.7, 9.2), (9.9, 0.4), (0.2, 7.3)])

    mask = rasterize_polygon(bowtie, 10, 10)

    assert np.array_equal(mask, _even_odd_oracle(bowtie, 10, 10))
    assert mask.any()


def test_rasterize_outside_canvas_is_empty() -> None:
    poly = Polygon.from_points([(50, 50), (60, 50), (60, 60)])

    assert not rasterize_polygon(poly, 20, 20).any()


def test_rasterize_rejects_empty_canvas() -> None:
    poly = Polygon.from_points([(0, 0), (4, 0), (4, 4)])

    with pytest.raises(ValueError):
        rasterize_polygon(poly, 0, 5)


def test_polygon_rejects_collinear_points() -> None:
    with pytest.raises(DegeneratePolygonError):
        Polygon.from_points([(0, 0), (5, 5), (10, 10)])


def test_polygon_rejects_too_few_points() -> None:
    with pytest.raises(DegeneratePolygonError):
        Polygon.from_points([(0, 0), (5, 5), (0, 0)])


def test_polygon_from_points_drops_repeats() -> None:
    poly = Polygon.from_points([(0, 0), (0, 0), (4, 0), (4, 3), (0, 0)])

    assert poly.points == ((0.0, 0.0), (4.0, 0.0), (4.0, 3.0))
    assert poly.area == pytest.approx(6.0)
    assert poly.bounds == (0.0, 0.0, 4.0, 3.0)


def test_polygon_scaled() -> None:
    poly = Polygon.from_points([(1, 1), (3, 1), (3, 2)]).scaled(2.0, 3.0)

    assert poly.flat_coordinates() == [2.0, 3.0, 6.0, 3.0, 6.0, 6.0]


def test_mask_iou_values() -> None:
    a = np.zeros((4, 4), dtype=bool)
    b = np.zeros((4, 4), dtype=bool)
    assert mask_iou(a, b) == 1.0

    a[0, :2] = True
    b[0, 1:3] = True
    assert mask_iou(a, b) == pytest.approx(1 / 3)


def test_mask_iou_requires_same_shape() -> None:
    with pytest.raises(ValueError):
        mask_iou(np.zeros((2, 2), dtype=bool), np.zeros((3, 2), dtype=bool))


def test_rasterization_is_monotone_under_containment(rng: np.random.Generator) -> None:
    for _ in range(200):
        corners = rng.uniform(5, 45, size=(3, 2))
        centre = corners.mean(axis=0)
        factor = rng.uniform(1.05, 2.0)
        inner = Polygon.from_points(corners.tolist())
        outer = Polygon.from_points((centre + factor * (corners - centre)).tolist())

        small = rasterize_polygon(inner, 50, 50)
        large = rasterize_polygon(outer, 50, 50)

        assert not (small & ~large).any()


def test_mask_iou_is_symmetric(rng: np.random.Generator) -> None:
    for _ in range(200):
        shape = (int(rng.integers(1, 20)), int(rng.integers(1, 20)))
        a = rng.random(shape) < rng.uniform(0, 1)
        b = rng.random(shape) < rng.uniform(0, 1)

        assert mask_iou(a, b) == mask_iou(b, a)
        assert 0.0 <= mask_iou(a, b) <= 1.0
