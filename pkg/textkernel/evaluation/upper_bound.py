"""Upper-bound protocol: how much F-measure the kernel representation itself gives up.

Each image's ground-truth kernels are treated as a perfect kernel prediction
and pushed through the same reconstruction used at inference time.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Sequence, Tuple

from textkernel.evaluation.matching import fit_canvas, match_detections
from textkernel.evaluation.prf import PRF, MatchCounts, aggregate, prf_from_counts
from textkernel.geometry.polygon import Polygon
from textkernel.morphology.labels import generate_labels
from textkernel.morphology.ops import DilationSize
from textkernel.postprocess.pipeline import PostprocessConfig, reconstruct_text_lines

LOGGER = logging.getLogger(__name__)

DEFAULT_SWEEP = (3, 5, 7, 9, 11)


def upper_bound_image(
    gts: Sequence[Polygon],
    s: int,
    canvas: Tuple[int, int] = (640, 640),
    iou_thresh: float = 0.5,
    min_kernel_area: int = 0,
) -> MatchCounts:
    width, height = fit_canvas(gts, canvas)
    labels = generate_labels(gts, width, height, s)
    cfg = PostprocessConfig(threshold=0.5, s=s, min_kernel_area=min_kernel_area)
    dets = reconstruct_text_lines(labels.kernel_mask.astype(float), cfg)
    result = match_detections(dets, gts, iou_thresh, (width, height))
    return MatchCounts.from_match(result, len(dets), len(gts))


def upper_bound_counts(
    gt_sets: Sequence[Sequence[Polygon]],
    s: int,
    canvas: Tuple[int, int] = (640, 640),
    iou_thresh: float = 0.5,
    min_kernel_area: int = 0,
    workers: int = 1,
) -> List[MatchCounts]:
    """Per-image counts in input order."""

    size = DilationSize(s)

    def run(gts: Sequence[Polygon]) -> MatchCounts:
        return upper_bound_image(gts, size, canvas, iou_thresh, min_kernel_area)

    if workers > 1 and len(gt_sets) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, gt_sets))
    return [run(gts) for gts in gt_sets]


def upper_bound_experiment(
    gt_sets: Sequence[Sequence[Polygon]],
    s: int,
    canvas: Tuple[int, int] = (640, 640),
    iou_thresh: float = 0.5,
    min_kernel_area: int = 0,
    workers: int = 1,
) -> PRF:
    """Micro-averaged P/R/F over all images for dilation size ``s``."""

    counts = aggregate(upper_bound_counts(gt_sets, s, canvas, iou_thresh, min_kernel_area, workers))
    prf = prf_from_counts(counts)
    LOGGER.info(
        "Upper bound s=%d over %d images: P=%.4f R=%.4f F=%.4f",
        s, len(gt_sets), prf.precision, prf.recall, prf.f_measure,
    )
    return prf


def upper_bound_sweep(
    gt_sets: Sequence[Sequence[Polygon]],
    sizes: Iterable[int] = DEFAULT_SWEEP,
    canvas: Tuple[int, int] = (640, 640),
    iou_thresh: float = 0.5,
    min_kernel_area: int = 0,
    workers: int = 1,
) -> Dict[int, PRF]:
    return {
        int(s): upper_bound_experiment(gt_sets, s, canvas, iou_thresh, min_kernel_area, workers)
        for s in sizes
    }


__all__ = [
    "DEFAULT_SWEEP",
    "upper_bound_image",
    "upper_bound_counts",
    "upper_bound_experiment",
    "upper_bound_sweep",
]
