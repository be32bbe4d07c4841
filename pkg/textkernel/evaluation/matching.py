"""Greedy one-to-one detection matching by mask IoU."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from textkernel.geometry.polygon import Polygon, rasterize_polygon
from textkernel.postprocess.pipeline import Detection

LOGGER = logging.getLogger(__name__)

Shape = Union[Detection, Polygon]


@dataclass(frozen=True)
class MatchResult:
    pairs: Tuple[Tuple[int, int, float], ...]
    unmatched_dets: Tuple[int, ...]
    unmatched_gts: Tuple[int, ...]

    @property
    def matched(self) -> int:
        return len(self.pairs)


def _polygon(item: Shape) -> Polygon:
    return item.polygon if isinstance(item, Detection) else item


def fit_canvas(polygons: Sequence[Polygon], canvas: Tuple[int, int]) -> Tuple[int, int]:
    """Grow ``(width, height)`` until every polygon's bounding box fits."""

    width, height = canvas
    for poly in polygons:
        _, _, max_x, max_y = poly.bounds
        width = max(width, int(math.ceil(max_x)) + 1)
        height = max(height, int(math.ceil(max_y)) + 1)
    if (width, height) != tuple(canvas):
        LOGGER.debug("Canvas grown from %s to %dx%d", canvas, width, height)
    return width, height


def iou_matrix(
    dets: Sequence[Polygon], gts: Sequence[Polygon], canvas: Tuple[int, int]
) -> np.ndarray:
    width, height = canvas
    det_masks = [rasterize_polygon(p, width, height) for p in dets]
    gt_masks = [rasterize_polygon(p, width, height) for p in gts]
    det_areas = [int(m.sum()) for m in det_masks]
    gt_areas = [int(m.sum()) for m in gt_masks]
    det_boxes = [p.bounds for p in dets]
    gt_boxes = [p.bounds for p in gts]

    ious = np.zeros((len(dets), len(gts)), dtype=np.float64)
    for d, det_mask in enumerate(det_masks):
        dx0, dy0, dx1, dy1 = det_boxes[d]
        for g, gt_mask in enumerate(gt_masks):
            gx0, gy0, gx1, gy1 = gt_boxes[g]
            if dx1 < gx0 or gx1 < dx0 or dy1 < gy0 or gy1 < dy0:
                continue
            inter = int(np.count_nonzero(det_mask & gt_mask))
            union = det_areas[d] + gt_areas[g] - inter
            if union > 0:
                ious[d, g] = inter / union
    return ious


def match_detections(
    dets: Sequence[Shape],
    gts: Sequence[Shape],
    iou_thresh: float = 0.5,
    canvas: Tuple[int, int] = (640, 640),
) -> MatchResult:
    """Pair detections and ground truths greedily in descending IoU order.

    Ties are broken by detection index, then ground-truth index. Pairs below
    ``iou_thresh`` are never formed.
    """

    if not 0.0 < iou_thresh <= 1.0:
        raise ValueError(f"iou_thresh must lie in (0, 1], got {iou_thresh}.")
    det_polys = [_polygon(item) for item in dets]
    gt_polys = [_polygon(item) for item in gts]
    size = fit_canvas(det_polys + gt_polys, canvas)
    ious = iou_matrix(det_polys, gt_polys, size)

    d_idx, g_idx = np.nonzero(ious >= iou_thresh)
    candidates = sorted(zip(d_idx.tolist(), g_idx.tolist()), key=lambda dg: (-ious[dg], dg[0], dg[1]))
    used_dets: set[int] = set()
    used_gts: set[int] = set()
    pairs: List[Tuple[int, int, float]] = []
    for d, g in candidates:
        if d in used_dets or g in used_gts:
            continue
        used_dets.add(d)
        used_gts.add(g)
        pairs.append((d, g, float(ious[d, g])))

    return MatchResult(
        pairs=tuple(pairs),
        unmatched_dets=tuple(i for i in range(len(det_polys)) if i not in used_dets),
        unmatched_gts=tuple(i for i in range(len(gt_polys)) if i not in used_gts),
    )


__all__ = ["MatchResult", "fit_canvas", "iou_matrix", "match_detections"]
