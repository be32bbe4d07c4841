"""Tests for the synthetic dataset generator."""
from __future__ import annotations

import json
from dataclasses import replace
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest

from textkernel.geometry.polygon import rasterize_polygon
from textkernel.io.annotations import list_annotation_files, parse_annotations
from textkernel.io.synth import SyntheticConfig, generate_dataset, write_dataset


def test_generation_is_deterministic() -> None:
    cfg = SyntheticConfig(count=5, seed=3, width=320, height=320, instances_per_image=6, min_side=10, max_side=50)

    assert generate_dataset(cfg) == generate_dataset(cfg)
    assert generate_dataset(cfg) != generate_dataset(replace(cfg, seed=4))


def test_instances_fit_and_do_not_overlap() -> None:
    cfg = SyntheticConfig(count=6, seed=1, width=200, height=160, instances_per_image=5, min_side=8, max_side=40)

    for image in generate_dataset(cfg):
        assert [image.width, image.height] == [200, 160]
        masks = [rasterize_polygon(poly, image.width, image.height) for poly in image.polygons]
        for poly in image.polygons:
            x0, y0, x1, y1 = poly.bounds
            assert 0 <= x0 and 0 <= y0 and x1 <= 200 and y1 <= 160
        for first, second in combinations(masks, 2):
            assert not (first & second).any()


def test_rotated_instances_stay_inside() -> None:
    cfg = SyntheticConfig(
        count=5, seed=2, width=300, height=300, instances_per_image=4, min_side=10, max_side=60, max_rotation_deg=30
    )

    for image in generate_dataset(cfg):
        for poly in image.polygons:
            x0, y0, x1, y1 = poly.bounds
            assert 0 <= x0 and 0 <= y0 and x1 <= 300 and y1 <= 300


def test_thin_instances_are_counted_exactly() -> None:
    cfg = SyntheticConfig(
        count=8, seed=9, width=400, height=400, instances_per_image=10, min_side=12, thin_fraction=0.2, thin_below=7
    )

    for image in generate_dataset(cfg):
        assert len(image.thin) == 2
        for index, poly in enumerate(image.polygons):
            x0, y0, x1, y1 = poly.bounds
            short = min(x1 - x0, y1 - y0)
            assert (short < 7) == (index in image.thin)


def test_crowded_layout_is_rejected() -> None:
    with pytest.raises(ValueError):
        generate_dataset(SyntheticConfig(count=1, width=50, height=50, instances_per_image=9, min_side=24))


@pytest.mark.parametrize(
    "kwargs",
    [{"count": 0}, {"min_side": 50, "max_side": 10}, {"thin_fraction": 1.5}, {"thin_below": 1}, {"spacing": -1}],
)
def test_invalid_config(kwargs: dict) -> None:
    with pytest.raises(ValueError):
        SyntheticConfig(**kwargs)


def test_write_dataset(tmp_path: Path) -> None:
    cfg = SyntheticConfig(count=3, seed=0, width=256, height=256, instances_per_image=4, min_side=10, max_side=40)
    images = generate_dataset(cfg)

    write_dataset(tmp_path, images, cfg)

    files = list_annotation_files(tmp_path)
    assert [p.name for p in files] == ["img_0001.txt", "img_0002.txt", "img_0003.txt"]
    assert parse_annotations(files[0]) == list(images[0].polygons)
    manifest = json.loads((tmp_path / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["config"]["seed"] == 0
    assert [entry["name"] for entry in manifest["images"]] == ["img_0001", "img_0002", "img_0003"]
    assert np.all([entry["width"] == 256 for entry in manifest["images"]])
