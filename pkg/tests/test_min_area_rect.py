"""Tests for convex hulls and minimum-area rectangles."""
from __future__ import annotations

import math

import numpy as np
import pytest

from textkernel.core.errors import DataFormatError
from textkernel.geometry.rect import RotatedRect, convex_hull, min_area_rect


def _sweep_min_area(points: np.ndarray, step_deg: float = 0.05) -> float:
    best = math.inf
    for angle in np.arange(0.0, 90.0, step_deg):
        theta = math.radians(angle)
        u = np.array([math.cos(theta), math.sin(theta)])
        v = np.array([-u[1], u[0]])
        along, across = points @ u, points @ v
        best = min(best, float((along.max() - along.min()) * (across.max() - across.min())))
    return best


def _rotated_box(cx: float, cy: float, w: float, h: float, angle: float) -> np.ndarray:
    return RotatedRect(center=(cx, cy), size=(w, h), angle=angle).corners()


def test_axis_aligned_rectangle() -> None:
    rect = min_area_rect([(0, 0), (4, 0), (4, 2), (0, 2), (1, 1)])

    assert sorted(rect.size) == [2.0, 4.0]
    assert rect.area == pytest.approx(8.0)
    assert rect.angle == 0.0
    assert rect.center == pytest.approx((2.0, 1.0))


def test_rotated_rectangle_is_recovered() -> None:
    corners = _rotated_box(20.0, 15.0, 10.0, 4.0, 30.0)

    rect = min_area_rect(corners.tolist())

    assert rect.angle == pytest.approx(30.0)
    assert rect.size == pytest.approx((10.0, 4.0))
    assert rect.center == pytest.approx((20.0, 15.0))
    assert np.allclose(sorted(map(tuple, rect.corners())), sorted(map(tuple, corners)))


def test_matches_angle_sweep_on_random_clouds(rng: np.random.Generator) -> None:
    for _ in range(40):
        points = rng.uniform(0.0, 50.0, size=(int(rng.integers(3, 30)), 2))

        rect = min_area_rect(points.tolist())
        sweep = _sweep_min_area(points)

        assert rect.area <= sweep + 1e-9
        assert rect.area >= sweep * (1.0 - 1e-2)
        assert -45.0 <= rect.angle < 45.0


def test_rectangle_contains_all_points(rng: np.random.Generator) -> None:
    points = rng.normal(0.0, 10.0, size=(25, 2))

    rect = min_area_rect(points.tolist())

    theta = math.radians(rect.angle)
    u = np.array([math.cos(theta), math.sin(theta)])
    v = np.array([-u[1], u[0]])
    offsets = points - np.asarray(rect.center)
    assert np.all(np.abs(offsets @ u) <= rect.size[0] / 2 + 1e-9)
    assert np.all(np.abs(offsets @ v) <= rect.size[1] / 2 + 1e-9)


def test_collinear_points_give_zero_area() -> None:
    rect = min_area_rect([(0, 0), (1, 1), (2, 2)])

    assert rect.area == pytest.approx(0.0)
    assert max(rect.size) == pytest.approx(2 * math.sqrt(2))


def test_single_point_and_empty_input() -> None:
    rect = min_area_rect([(3, 4), (3, 4)])

    assert rect.center == (3.0, 4.0)
    assert rect.size == (0.0, 0.0)
    with pytest.raises(DataFormatError):
        min_area_rect([])


def test_convex_hull_drops_interior_and_collinear_points() -> None:
    hull = convex_hull([(0, 0), (2, 0), (4, 0), (4, 4), (0, 4), (1, 1), (2, 3)])

    assert hull == [(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]


def test_to_polygon_has_rect_area() -> None:
    rect = RotatedRect(center=(5.0, 5.0), size=(6.0, 2.0), angle=20.0)

    assert rect.to_polygon().area == pytest.approx(12.0)
