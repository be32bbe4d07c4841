"""Text dilation: rebuild text lines from a predicted kernel map."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Literal, Optional

import numpy as np

from textkernel.ccl.label_map import LabelMap
from textkernel.ccl.labeling import CONNECTIVITIES, label_components, label_components_parallel
from textkernel.geometry.contours import trace_contours
from textkernel.geometry.polygon import Polygon
from textkernel.geometry.rect import min_area_rect
from textkernel.morphology.ops import DilationSize, soft_dilate, window_max
from textkernel.state.timings import TimingLedger

LOGGER = logging.getLogger(__name__)

OutputMode = Literal["polygon", "min_area_rect"]
OUTPUT_MODES = ("polygon", "min_area_rect")


@dataclass(frozen=True)
class PostprocessConfig:
    threshold: float = 0.5
    s: int = 9
    min_kernel_area: int = 10
    output_mode: OutputMode = "polygon"
    connectivity: int = 8
    tiles: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", DilationSize(self.s))
        if self.min_kernel_area < 0:
            raise ValueError("min_kernel_area must be >= 0.")
        if self.output_mode not in OUTPUT_MODES:
            raise ValueError(f"output_mode must be one of {OUTPUT_MODES}, got {self.output_mode!r}.")
        if self.connectivity not in CONNECTIVITIES:
            raise ValueError(f"connectivity must be 4 or 8, got {self.connectivity}.")
        if self.tiles < 1:
            raise ValueError("tiles must be >= 1.")


@dataclass(frozen=True)
class Detection:
    polygon: Polygon
    score: float
    label: int

    def scaled(self, sx: float, sy: float) -> "Detection":
        return Detection(polygon=self.polygon.scaled(sx, sy), score=self.score, label=self.label)


@dataclass
class Reconstruction:
    """Detections together with the intermediate label maps they came from."""

    detections: List[Detection]
    kernels: LabelMap
    regions: LabelMap
    timings: TimingLedger = field(default_factory=TimingLedger)


def binarize(values: np.ndarray, threshold: float) -> np.ndarray:
    return np.asarray(values, dtype=np.float64) > threshold


def dilate_labels(labels: LabelMap, s: int) -> LabelMap:
    """Grow every labeled kernel by its window maximum; contested pixels take the larger id.

    Kernel pixels keep their own id, so every id of ``labels`` survives.
    """

    grown = window_max(labels.labels, s)
    grown = np.where(labels.labels > 0, labels.labels, grown)
    return LabelMap(grown, labels.count, check=False)


def filter_small_components(labels: LabelMap, min_area: int) -> LabelMap:
    """Drop components below ``min_area`` pixels and renumber the rest in order."""

    if min_area <= 0 or labels.count == 0:
        return labels
    areas = labels.areas()
    keep = areas >= min_area
    keep[0] = False
    mapping = np.zeros(labels.count + 1, dtype=np.int32)
    mapping[keep] = np.arange(1, int(keep.sum()) + 1, dtype=np.int32)
    dropped = labels.count - int(keep.sum())
    if dropped:
        LOGGER.debug("Dropped %d kernels smaller than %d px", dropped, min_area)
    return LabelMap(mapping[labels.labels], int(keep.sum()), check=False)


def _kernel_scores(values: np.ndarray, kernels: LabelMap) -> np.ndarray:
    flat = kernels.labels.ravel()
    sums = np.bincount(flat, weights=values.ravel(), minlength=kernels.count + 1)
    areas = np.bincount(flat, minlength=kernels.count + 1)
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(areas > 0, sums / np.maximum(areas, 1), 0.0)
    return np.clip(means, 0.0, 1.0)


def reconstruct(kernel_map: np.ndarray, cfg: PostprocessConfig, ledger: Optional[TimingLedger] = None) -> Reconstruction:
    ledger = ledger or TimingLedger()
    values = np.asarray(kernel_map, dtype=np.float64)
    with ledger.stage("total"):
        with ledger.stage("ccl"):
            mask = binarize(values, cfg.threshold)
            if cfg.tiles > 1:
                kernels = label_components_parallel(mask, cfg.connectivity, cfg.tiles)
            else:
                kernels = label_components(mask, cfg.connectivity)
            kernels = filter_small_components(kernels, cfg.min_kernel_area)
        with ledger.stage("dilate"):
            regions = dilate_labels(kernels, cfg.s)
        with ledger.stage("contour"):
            scores = _kernel_scores(values, kernels)
            detections: List[Detection] = []
            for label, outline in trace_contours(regions):
                polygon = outline
                if cfg.output_mode == "min_area_rect":
                    polygon = min_area_rect(outline.points).to_polygon()
                detections.append(Detection(polygon=polygon, score=float(scores[label]), label=label))
    LOGGER.debug("Reconstructed %d text lines", len(detections))
    return Reconstruction(detections=detections, kernels=kernels, regions=regions, timings=ledger)


def reconstruct_text_lines(
    kernel_map: np.ndarray, cfg: PostprocessConfig, ledger: Optional[TimingLedger] = None
) -> List[Detection]:
    """Binarize, label, filter, dilate and outline; one detection per surviving kernel."""

    return reconstruct(kernel_map, cfg, ledger).detections


def training_forward(kernel_map: np.ndarray, s: int) -> np.ndarray:
    """Training branch: the text map is the window maximum of the kernel map."""

    return soft_dilate(kernel_map, s)


__all__ = [
    "OUTPUT_MODES",
    "PostprocessConfig",
    "Detection",
    "Reconstruction",
    "binarize",
    "dilate_labels",
    "filter_small_components",
    "reconstruct",
    "reconstruct_text_lines",
    "training_forward",
]
