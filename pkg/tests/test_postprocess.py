"""Tests for text-line reconstruction from kernel maps."""
from __future__ import annotations

import numpy as np
import pytest

from textkernel.ccl import LabelMap
from textkernel.geometry import rasterize_polygon
from textkernel.morphology.ops import erode, soft_dilate
from textkernel.postprocess import (
    PostprocessConfig,
    binarize,
    dilate_labels,
    reconstruct,
    reconstruct_text_lines,
    training_forward,
)
from textkernel.postprocess.pipeline import filter_small_components
from textkernel.state import TimingLedger


def _build_rectangle(shape: tuple[int, int], top: int, left: int, h: int, w: int) -> np.ndarray:
    mask = np.zeros(shape, dtype=bool)
    mask[top : top + h, left : left + w] = True
    return mask


def _random_rectangle(rng: np.random.Generator, s: int) -> np.ndarray:
    margin = s // 2
    h, w = int(rng.integers(s, 30)), int(rng.integers(s, 30))
    height = h + 2 * margin + int(rng.integers(0, 12))
    width = w + 2 * margin + int(rng.integers(0, 12))
    top = int(rng.integers(margin, height - h - margin + 1))
    left = int(rng.integers(margin, width - w - margin + 1))
    return _build_rectangle((height, width), top, left, h, w)


def test_binarize_is_strict() -> None:
    assert binarize(np.array([[0.4, 0.5, 0.6]]), 0.5).tolist() == [[False, False, True]]


def test_kernel_round_trip_restores_rectangles(rng: np.random.Generator) -> None:
    for _ in range(200):
        s = int(rng.choice([3, 5, 7, 9]))
        text = _random_rectangle(rng, s)
        kernel_map = erode(text, s).astype(np.float64)
        cfg = PostprocessConfig(s=s, min_kernel_area=0)

        [detection] = reconstruct_text_lines(kernel_map, cfg)

        height, width = text.shape
        assert np.array_equal(rasterize_polygon(detection.polygon, width, height), text)


def test_rect_mode_returns_axis_aligned_box() -> None:
    text = _build_rectangle((40, 60), 8, 10, 20, 35)
    cfg = PostprocessConfig(s=9, min_kernel_area=0, output_mode="min_area_rect")

    [detection] = reconstruct_text_lines(erode(text, 9).astype(float), cfg)

    assert len(detection.polygon.points) == 4
    assert np.array_equal(rasterize_polygon(detection.polygon, 60, 40), text)


def test_separate_instances_keep_their_own_detection() -> None:
    first = _build_rectangle((50, 80), 5, 5, 20, 30)
    second = _build_rectangle((50, 80), 5, 50, 20, 25)
    kernel_map = (erode(first, 5) | erode(second, 5)).astype(float)

    detections = reconstruct_text_lines(kernel_map, PostprocessConfig(s=5, min_kernel_area=0))

    assert [d.label for d in detections] == [1, 2]
    masks = [rasterize_polygon(d.polygon, 80, 50) for d in detections]
    assert np.array_equal(masks[0], first)
    assert np.array_equal(masks[1], second)


def test_filter_small_components_renumbers() -> None:
    labels = LabelMap(np.array([[1, 1, 1, 0, 2, 2], [0, 0, 0, 0, 2, 2], [3, 0, 0, 0, 2, 2]]), 3)

    kept = filter_small_components(labels, 3)

    assert kept.count == 2
    assert kept.labels.tolist() == [[1, 1, 1, 0, 2, 2], [0, 0, 0, 0, 2, 2], [0, 0, 0, 0, 2, 2]]
    assert filter_small_components(labels, 0) is labels


def test_small_kernels_are_dropped_by_default() -> None:
    kernel_map = np.zeros((30, 30))
    kernel_map[5:8, 5:8] = 0.9
    kernel_map[15:25, 15:25] = 0.9

    detections = reconstruct_text_lines(kernel_map, PostprocessConfig(s=3))

    assert len(detections) == 1


def test_contested_pixels_go_to_larger_id() -> None:
    labels = LabelMap(np.array([[0, 0, 1, 0, 0, 0, 2, 0, 0]]), 2)

    grown = dilate_labels(labels, 5)

    assert grown.labels.tolist() == [[1, 1, 1, 1, 2, 2, 2, 2, 2]]


def test_kernel_enclosed_by_larger_id_keeps_its_detection() -> None:
    kernel_map = np.zeros((30, 30))
    kernel_map[0:3, 6:9] = 1.0
    kernel_map[1:21, 2:4] = 1.0
    kernel_map[1:21, 12:14] = 1.0
    kernel_map[19:21, 2:14] = 1.0

    result = reconstruct(kernel_map, PostprocessConfig(s=9, min_kernel_area=0))

    assert result.kernels.count == 2
    assert set(np.unique(result.regions.labels).tolist()) == {0, 1, 2}
    assert [d.label for d in result.detections] == [1, 2]
    small = rasterize_polygon(result.detections[0].polygon, 30, 30)
    assert np.array_equal(small, _build_rectangle((30, 30), 0, 6, 3, 3))


def test_dilated_labels_keep_every_kernel_pixel(rng: np.random.Generator) -> None:
    for _ in range(100):
        kernel_map = (rng.random((40, 40)) < 0.05).astype(float)
        kernels = reconstruct(kernel_map, PostprocessConfig(s=5, min_kernel_area=0)).kernels

        grown = dilate_labels(kernels, 5)

        inside = kernels.labels > 0
        assert np.array_equal(grown.labels[inside], kernels.labels[inside])
        assert set(np.unique(grown.labels).tolist()) == set(range(kernels.count + 1))


def test_raising_threshold_never_grows_kernel_area(rng: np.random.Generator) -> None:
    for _ in range(50):
        kernel_map = rng.random((32, 32))
        areas = [
            reconstruct(kernel_map, PostprocessConfig(threshold=t, s=3, min_kernel_area=0)).kernels.binary().sum()
            for t in np.linspace(0.0, 0.95, 12)
        ]

        assert all(later <= earlier for earlier, later in zip(areas, areas[1:]))


def test_scores_are_mean_kernel_probability() -> None:
    kernel_map = np.zeros((20, 40))
    kernel_map[5:15, 5:15] = 0.8
    kernel_map[5:15, 25:35] = 0.6

    detections = reconstruct_text_lines(kernel_map, PostprocessConfig(s=3, min_kernel_area=0))

    assert [d.score for d in detections] == pytest.approx([0.8, 0.6])


def test_tiled_labeling_gives_same_detections(rng: np.random.Generator) -> None:
    kernel_map = rng.random((64, 64)) * (rng.random((64, 64)) < 0.4)

    for tiles in (2, 3, 8):
        sequential = reconstruct_text_lines(kernel_map, PostprocessConfig(s=3, min_kernel_area=0))
        tiled = reconstruct_text_lines(kernel_map, PostprocessConfig(s=3, min_kernel_area=0, tiles=tiles))
        assert tiled == sequential
        assert reconstruct_text_lines(kernel_map, PostprocessConfig(s=3, min_kernel_area=0, tiles=tiles)) == tiled


def test_training_forward_is_soft_dilation(rng: np.random.Generator) -> None:
    kernel_map = rng.random((16, 12))

    assert np.array_equal(training_forward(kernel_map, 5), soft_dilate(kernel_map, 5))


def test_empty_map_gives_no_detections() -> None:
    result = reconstruct(np.zeros((10, 10)), PostprocessConfig())

    assert result.detections == []
    assert result.kernels.count == 0


def test_stages_are_timed() -> None:
    ledger = TimingLedger()
    kernel_map = np.zeros((20, 20))
    kernel_map[5:15, 5:15] = 1.0

    reconstruct(kernel_map, PostprocessConfig(s=3), ledger)

    assert {"total", "ccl", "dilate", "contour"} <= set(ledger.totals())
    assert ledger.totals()["total"] >= ledger.totals()["ccl"]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"s": 4},
        {"min_kernel_area": -1},
        {"output_mode": "ellipse"},
        {"connectivity": 6},
        {"tiles": 0},
    ],
)
def test_invalid_config_is_rejected(kwargs: dict) -> None:
    with pytest.raises(ValueError):
        PostprocessConfig(**kwargs)
