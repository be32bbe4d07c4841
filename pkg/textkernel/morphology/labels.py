"""Ground-truth generation for the minimalist kernel representation."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from textkernel.ccl.label_map import LabelMap
from textkernel.geometry.polygon import Polygon, rasterize_polygon
from textkernel.morphology.ops import DilationSize, erode

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class KernelLabels:
    """Text-region mask, kernel ids and the instance behind each id.

    Kernel ids are compact: id ``k`` belongs to polygon ``instance_ids[k - 1]``.
    ``empty_instances`` lists polygons whose own erosion was empty and
    ``hidden_instances`` those whose kernel later polygons fully overwrote.
    """

    text_mask: np.ndarray
    kernel_labels: LabelMap
    instance_ids: Tuple[int, ...] = ()
    empty_instances: Tuple[int, ...] = ()
    hidden_instances: Tuple[int, ...] = ()

    @property
    def kernel_mask(self) -> np.ndarray:
        return self.kernel_labels.binary()

    def instance_kernel(self, index: int) -> np.ndarray:
        """Binary kernel of polygon ``index``; empty when it has none."""

        if index not in self.instance_ids:
            return np.zeros_like(self.text_mask)
        return self.kernel_labels.labels == self.instance_ids.index(index) + 1


def generate_labels(polys: Sequence[Polygon], width: int, height: int, s: int) -> KernelLabels:
    """Rasterize every polygon into G_tex and erode each instance on its own into G_ker.

    Later polygons overwrite earlier ones where kernels overlap.
    """

    size = DilationSize(s)
    text_mask = np.zeros((height, width), dtype=bool)
    kernels = np.zeros((height, width), dtype=np.int32)
    empty: list[int] = []
    for index, poly in enumerate(polys):
        instance = rasterize_polygon(poly, width, height)
        text_mask |= instance
        kernel = erode(instance, size)
        if not kernel.any():
            empty.append(index)
            continue
        kernels[kernel] = index + 1

    present = np.bincount(kernels.ravel(), minlength=len(polys) + 1) > 0
    present[0] = False
    instance_ids = tuple((np.flatnonzero(present) - 1).tolist())
    hidden = tuple(i for i in range(len(polys)) if not present[i + 1] and i not in empty)
    compact = np.zeros(len(polys) + 1, dtype=np.int32)
    compact[present] = np.arange(1, len(instance_ids) + 1, dtype=np.int32)

    if empty:
        LOGGER.warning("%d of %d instances have an empty kernel at s=%d", len(empty), len(polys), size)
    if hidden:
        LOGGER.warning("%d instances are hidden by later overlapping kernels", len(hidden))
    return KernelLabels(
        text_mask=text_mask,
        kernel_labels=LabelMap(compact[kernels], len(instance_ids)),
        instance_ids=instance_ids,
        empty_instances=tuple(empty),
        hidden_instances=hidden,
    )


__all__ = ["KernelLabels", "generate_labels"]
