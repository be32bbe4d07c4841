"""Tests for window morphology, the soft dilation VJP and label generation."""
from __future__ import annotations

import numpy as np
import pytest

from textkernel.geometry.polygon import Polygon
from textkernel.morphology.labels import generate_labels
from textkernel.morphology.ops import (
    DilationSize,
    dilate,
    erode,
    scale_dilation_size,
    soft_dilate,
    soft_dilate_vjp,
    window_argmax,
)

SIZES = (3, 5, 7, 9, 11)


def _naive_window(values: np.ndarray, s: int, reducer, fill: float) -> np.ndarray:
    radius = s // 2
    padded = np.pad(values, radius, mode="constant", constant_values=fill)
    height, width = values.shape
    out = padded[:height, :width].copy()
    for dy in range(s):
        for dx in range(s):
            out = reducer(out, padded[dy : dy + height, dx : dx + width])
    return out


def _build_mask(rng: np.random.Generator, max_side: int = 64) -> np.ndarray:
    shape = (int(rng.integers(1, max_side + 1)), int(rng.integers(1, max_side + 1)))
    return rng.random(shape) < rng.uniform(0.01, 0.6)


def _build_rectangle(height: int, width: int, top: int, left: int, h: int, w: int) -> np.ndarray:
    mask = np.zeros((height, width), dtype=bool)
    mask[top : top + h, left : left + w] = True
    return mask


def test_dilate_matches_minkowski_oracle(rng: np.random.Generator) -> None:
    for _ in range(1000):
        mask = _build_mask(rng, max_side=256)
        for s in SIZES:
            expected = _naive_window(mask, s, np.logical_or, False)
            assert np.array_equal(dilate(mask, s), expected)


def test_erode_matches_oracle_with_zero_padding(rng: np.random.Generator) -> None:
    for _ in range(100):
        mask = _build_mask(rng)
        for s in SIZES:
            expected = _naive_window(mask, s, np.logical_and, False)
            assert np.array_equal(erode(mask, s), expected)


def test_erosion_is_dual_to_dilation_of_the_complement(rng: np.random.Generator) -> None:
    for _ in range(100):
        mask = _build_mask(rng)
        for s in SIZES:
            r = s // 2
            outside_set = ~np.pad(mask, r, mode="constant", constant_values=False)
            assert np.array_equal(erode(mask, s), ~dilate(outside_set, s)[r:-r, r:-r])


def test_erosion_shrinks_and_dilation_grows(rng: np.random.Generator) -> None:
    for _ in range(100):
        mask = _build_mask(rng)
        for s in SIZES:
            eroded, dilated = erode(mask, s), dilate(mask, s)
            assert not (eroded & ~mask).any()
            assert not (mask & ~dilated).any()


def test_opening_is_exact_for_large_rectangles(rng: np.random.Generator) -> None:
    for _ in range(200):
        s = int(rng.choice(SIZES))
        margin = s // 2
        h, w = int(rng.integers(s, 40)), int(rng.integers(s, 40))
        height = h + 2 * margin + int(rng.integers(0, 10))
        width = w + 2 * margin + int(rng.integers(0, 10))
        top = int(rng.integers(margin, height - h - margin + 1))
        left = int(rng.integers(margin, width - w - margin + 1))
        rect = _build_rectangle(height, width, top, left, h, w)

        assert np.array_equal(dilate(erode(rect, s), s), rect)


def test_thin_rectangle_erodes_to_nothing() -> None:
    rect = _build_rectangle(30, 30, 10, 5, 8, 20)

    assert not erode(rect, 9).any()


def test_size_one_is_identity(rng: np.random.Generator) -> None:
    mask = _build_mask(rng)

    assert np.array_equal(dilate(mask, 1), mask)
    assert np.array_equal(erode(mask, 1), mask)


def test_soft_dilate_matches_max_pool_oracle(rng: np.random.Generator) -> None:
    for _ in range(50):
        values = rng.random((int(rng.integers(1, 20)), int(rng.integers(1, 20))))
        for s in (3, 5):
            assert np.array_equal(soft_dilate(values, s), _naive_window(values, s, np.maximum, -np.inf))


def test_soft_dilate_agrees_with_binary_dilate(rng: np.random.Generator) -> None:
    mask = _build_mask(rng)

    assert np.array_equal(soft_dilate(mask.astype(float), 5) > 0.5, dilate(mask, 5))


def test_window_argmax_prefers_lowest_index_on_ties() -> None:
    rows, cols = window_argmax(np.ones((4, 4)), 3)

    assert (rows[0, 0], cols[0, 0]) == (0, 0)
    assert (rows[2, 2], cols[2, 2]) == (1, 1)
    assert (rows[3, 1], cols[3, 1]) == (2, 0)


def test_soft_dilate_vjp_matches_finite_differences(rng: np.random.Generator) -> None:
    for _ in range(10):
        shape = (int(rng.integers(3, 7)), int(rng.integers(3, 7)))
        values = (rng.permutation(shape[0] * shape[1]).reshape(shape) + 0.5) / (shape[0] * shape[1])
        upstream = rng.normal(size=shape)
        analytic = soft_dilate_vjp(values, 3, upstream)

        numeric = np.zeros(shape)
        h = 1e-6
        for index in np.ndindex(shape):
            shifted = values.copy()
            shifted[index] += h
            upper = float(np.sum(soft_dilate(shifted, 3) * upstream))
            shifted[index] -= 2 * h
            lower = float(np.sum(soft_dilate(shifted, 3) * upstream))
            numeric[index] = (upper - lower) / (2 * h)

        assert np.allclose(analytic, numeric, atol=1e-6)


def test_soft_dilate_vjp_conserves_upstream_mass(rng: np.random.Generator) -> None:
    values = rng.random((9, 7))
    upstream = rng.random((9, 7))

    assert soft_dilate_vjp(values, 5, upstream).sum() == pytest.approx(upstream.sum())


@pytest.mark.parametrize(
    ("new_side", "expected"),
    [(640, 9), (512, 7), (800, 11), (320, 5), (736, 10)],
)
def test_scale_dilation_size(new_side: int, expected: int) -> None:
    assert scale_dilation_size(new_side, 640, 9) == expected


def test_scale_dilation_size_rejects_non_positive() -> None:
    with pytest.raises(ValueError):
        scale_dilation_size(0, 640, 9)
    with pytest.raises(ValueError):
        scale_dilation_size(640, -1, 9)


def test_dilation_size_validation() -> None:
    assert DilationSize(9).radius == 4
    assert DilationSize.coerce(10) == 11
    assert DilationSize.coerce(0) == 1
    with pytest.raises(ValueError):
        DilationSize(4)
    with pytest.raises(ValueError):
        DilationSize(-3)


def test_generate_labels_single_rectangle() -> None:
    poly = Polygon.from_points([(10, 10), (40, 10), (40, 30), (10, 30)])

    labels = generate_labels([poly], 64, 48, 9)

    assert labels.text_mask.sum() == 30 * 20
    kernel = labels.kernel_labels.labels
    assert set(np.unique(kernel).tolist()) == {0, 1}
    assert np.array_equal(np.argwhere(kernel == 1).min(axis=0), [14, 14])
    assert np.array_equal(np.argwhere(kernel == 1).max(axis=0), [25, 35])
    assert labels.empty_instances == ()


def test_generate_labels_reports_empty_kernels() -> None:
    wide = Polygon.from_points([(5, 5), (35, 5), (35, 25), (5, 25)])
    thin = Polygon.from_points([(5, 30), (35, 30), (35, 35), (5, 35)])
    last = Polygon.from_points([(5, 38), (35, 38), (35, 48), (5, 48)])

    labels = generate_labels([wide, thin, last], 48, 48, 9)

    assert labels.empty_instances == (1,)
    assert labels.instance_ids == (0, 2)
    assert labels.kernel_labels.count == 2
    assert set(np.unique(labels.kernel_labels.labels).tolist()) == {0, 1, 2}
    assert labels.instance_kernel(2).any()
    assert not labels.instance_kernel(1).any()
    assert labels.text_mask[32, 20]


def test_generate_labels_later_instances_overwrite() -> None:
    first = Polygon.from_points([(0, 0), (30, 0), (30, 30), (0, 30)])
    second = Polygon.from_points([(10, 10), (40, 10), (40, 40), (10, 40)])

    labels = generate_labels([first, second], 48, 48, 3)

    assert labels.kernel_labels.labels[20, 20] == 2
    assert labels.kernel_labels.labels[5, 5] == 1


def test_generate_labels_compacts_fully_hidden_kernels() -> None:
    inner = Polygon.from_points([(15, 15), (25, 15), (25, 25), (15, 25)])
    outer = Polygon.from_points([(5, 5), (40, 5), (40, 40), (5, 40)])

    labels = generate_labels([inner, outer], 48, 48, 3)

    assert labels.hidden_instances == (0,)
    assert labels.instance_ids == (1,)
    assert labels.kernel_labels.count == 1
    assert np.array_equal(labels.instance_kernel(1), labels.kernel_mask)
