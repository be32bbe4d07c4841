"""Seeded synthetic text-instance datasets.

Each image is divided into a grid and every instance gets its own cell, so
instances never touch. A configurable fraction of instances is made "thin"
(one side shorter than ``thin_below``) so that their kernels vanish under
erosion with that size.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Tuple

import numpy as np

from textkernel.geometry.polygon import Polygon
from textkernel.io.annotations import write_polygons
from textkernel.io.files import atomic_write_text

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyntheticConfig:
    count: int = 100
    seed: int = 0
    width: int = 640
    height: int = 640
    instances_per_image: int = 10
    min_side: int = 24
    max_side: int = 120
    spacing: int = 12
    max_rotation_deg: float = 0.0
    thin_fraction: float = 0.0
    thin_below: int = 9

    def __post_init__(self) -> None:
        if self.count < 1 or self.instances_per_image < 1:
            raise ValueError("count and instances_per_image must be >= 1.")
        if not 1 <= self.min_side <= self.max_side:
            raise ValueError(f"Need 1 <= min_side <= max_side, got {self.min_side}, {self.max_side}.")
        if not 0.0 <= self.thin_fraction <= 1.0:
            raise ValueError(f"thin_fraction must lie in [0, 1], got {self.thin_fraction}.")
        if self.thin_below < 2:
            raise ValueError("thin_below must be >= 2.")
        if self.spacing < 0 or self.max_rotation_deg < 0:
            raise ValueError("spacing and max_rotation_deg must be >= 0.")

    @property
    def thin_per_image(self) -> int:
        return int(round(self.thin_fraction * self.instances_per_image))


@dataclass(frozen=True)
class SyntheticImage:
    name: str
    width: int
    height: int
    polygons: Tuple[Polygon, ...]
    thin: Tuple[int, ...] = field(default_factory=tuple)


def _grid(cfg: SyntheticConfig) -> Tuple[int, int, int, int]:
    cols = int(math.ceil(math.sqrt(cfg.instances_per_image)))
    rows = int(math.ceil(cfg.instances_per_image / cols))
    cell_w, cell_h = cfg.width // cols, cfg.height // rows
    if min(cell_w, cell_h) - cfg.spacing < cfg.min_side:
        raise ValueError(
            f"{cfg.instances_per_image} instances of side >= {cfg.min_side} do not fit a "
            f"{cfg.width}x{cfg.height} image with spacing {cfg.spacing}."
        )
    return cols, rows, cell_w, cell_h


def _rectangle(
    rng: np.random.Generator, cfg: SyntheticConfig, cell: Tuple[int, int, int, int], thin: bool
) -> Polygon:
    x0, y0, cell_w, cell_h = cell
    room_w, room_h = cell_w - cfg.spacing, cell_h - cfg.spacing
    if cfg.max_rotation_deg > 0:
        room_w = room_h = max(cfg.min_side, int(min(room_w, room_h) / math.sqrt(2)))
    w = int(rng.integers(cfg.min_side, min(cfg.max_side, room_w) + 1))
    h = int(rng.integers(cfg.min_side, min(cfg.max_side, room_h) + 1))
    if thin:
        short = int(rng.integers(1, cfg.thin_below))
        if rng.random() < 0.5:
            w = short
        else:
            h = short
    if cfg.max_rotation_deg > 0:
        # Rotated boxes stay centred so their corners cannot leave the cell.
        left, top = x0 + (cell_w - w) // 2, y0 + (cell_h - h) // 2
    else:
        left = x0 + cfg.spacing // 2 + int(rng.integers(0, room_w - w + 1))
        top = y0 + cfg.spacing // 2 + int(rng.integers(0, room_h - h + 1))
    corners = np.array([[left, top], [left + w, top], [left + w, top + h], [left, top + h]], dtype=np.float64)
    if cfg.max_rotation_deg > 0:
        theta = math.radians(float(rng.uniform(-cfg.max_rotation_deg, cfg.max_rotation_deg)))
        center = corners.mean(axis=0)
        rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        corners = np.rint((corners - center) @ rot.T + center)
    return Polygon.from_points(corners.tolist())


def generate_dataset(cfg: SyntheticConfig) -> List[SyntheticImage]:
    """Deterministic for a given config; instances are listed in grid-cell order."""

    rng = np.random.default_rng(cfg.seed)
    cols, rows, cell_w, cell_h = _grid(cfg)
    n = cfg.instances_per_image
    images: List[SyntheticImage] = []
    for index in range(cfg.count):
        cells = np.sort(rng.permutation(cols * rows)[:n])
        thin = set(rng.choice(n, size=cfg.thin_per_image, replace=False).tolist()) if cfg.thin_per_image else set()
        polygons = []
        for slot, cell in enumerate(cells.tolist()):
            origin = ((cell % cols) * cell_w, (cell // cols) * cell_h, cell_w, cell_h)
            polygons.append(_rectangle(rng, cfg, origin, slot in thin))
        images.append(
            SyntheticImage(
                name=f"img_{index + 1:04d}",
                width=cfg.width,
                height=cfg.height,
                polygons=tuple(polygons),
                thin=tuple(sorted(thin)),
            )
        )
    return images


def write_dataset(out_dir: str | Path, images: List[SyntheticImage], cfg: SyntheticConfig) -> Path:
    """One annotation file per image plus ``manifest.json``."""

    out = Path(out_dir)
    for image in images:
        write_polygons(out / f"{image.name}.txt", image.polygons)
    manifest = {
        "config": asdict(cfg),
        "images": [{"name": im.name, "width": im.width, "height": im.height, "thin": list(im.thin)} for im in images],
    }
    atomic_write_text(out / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    LOGGER.info("Wrote %d synthetic images to %s", len(images), out)
    return out


__all__ = ["SyntheticConfig", "SyntheticImage", "generate_dataset", "write_dataset"]
