"""Connected-components labeling of binary masks.

Sequential labeling is scipy's two-pass union-find labeler, whose provisional
labels always merge downwards, so components come out numbered 1..count in
order of their first pixel in row-major order.

The tiled variant labels horizontal bands in worker threads (the labeler runs
without the GIL), merges band-local ids that touch across each seam with a
union-find forest, and relabels every band through one lookup table.
"""
from __future__ import annotations

import logging
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage

from textkernel.ccl.label_map import LabelMap
from textkernel.ccl.union_find import UnionFind

LOGGER = logging.getLogger(__name__)

CONNECTIVITIES = (4, 8)

_STRUCTURES = {
    4: ndimage.generate_binary_structure(2, 1),
    8: ndimage.generate_binary_structure(2, 2),
}


def _check_connectivity(connectivity: int) -> int:
    if connectivity not in CONNECTIVITIES:
        raise ValueError(f"Connectivity must be 4 or 8, got {connectivity}.")
    return connectivity


def label_components(mask: np.ndarray, connectivity: int = 8) -> LabelMap:
    """Canonical labeling of ``mask`` under 4- or 8-connectivity."""

    _check_connectivity(connectivity)
    data = np.asarray(mask, dtype=bool)
    labels, count = ndimage.label(data, structure=_STRUCTURES[connectivity])
    return LabelMap(labels.astype(np.int32, copy=False), int(count), check=False)


@dataclass(frozen=True)
class Band:
    start: int
    stop: int


def split_bands(height: int, tiles: int) -> List[Band]:
    """At most ``tiles`` non-empty row bands of near-equal height."""

    if tiles < 1:
        raise ValueError(f"tiles must be >= 1, got {tiles}.")
    bounds = np.linspace(0, height, min(tiles, max(height, 1)) + 1).round().astype(int)
    return [Band(int(lo), int(hi)) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]


def seam_pairs(upper: np.ndarray, lower: np.ndarray, connectivity: int) -> np.ndarray:
    """Unique ``(upper id, lower id)`` pairs of set pixels touching across a seam."""

    shifts = (0,) if connectivity == 4 else (-1, 0, 1)
    width = upper.size
    pairs = []
    for shift in shifts:
        top = upper[max(0, -shift) : width - max(0, shift)]
        bottom = lower[max(0, shift) : width - max(0, -shift)]
        touching = (top > 0) & (bottom > 0)
        pairs.append(np.stack([top[touching], bottom[touching]], axis=1))
    merged = np.concatenate(pairs).astype(np.int64)
    if not merged.size:
        return merged
    return np.unique(merged, axis=0)


def _canonical_table(total: int, forest: UnionFind, touched: set[int]) -> Tuple[np.ndarray, int]:
    """Map provisional ids ``1..total`` to canonical ids; index 0 stays background.

    Provisional ids grow in row-major order of first appearance, so each
    component is ranked by its smallest member.
    """

    ids = np.arange(total + 1, dtype=np.int64)
    roots = ids.copy()
    for node in touched:
        roots[node + 1] = forest.find(node) + 1
    smallest = np.full(total + 1, total + 1, dtype=np.int64)
    np.minimum.at(smallest, roots, ids)
    representative = smallest[roots]
    first = representative == ids
    first[0] = False
    rank = np.cumsum(first)
    table = rank[representative].astype(np.int32)
    table[0] = 0
    return table, int(rank[-1])


def label_components_parallel(
    mask: np.ndarray,
    connectivity: int = 8,
    tiles: int = 4,
    executor: Optional[Executor] = None,
) -> LabelMap:
    """Tile-parallel labeling with output identical to :func:`label_components`.

    ``executor`` must be a thread pool; passing one reuses it across calls.
    By default a pool with one worker per band lives for the call.
    """

    _check_connectivity(connectivity)
    data = np.asarray(mask, dtype=bool)
    bands = split_bands(data.shape[0], tiles)
    if len(bands) <= 1:
        return label_components(data, connectivity)

    structure = _STRUCTURES[connectivity]
    labels = np.zeros(data.shape, dtype=np.int32)

    def label_band(band: Band) -> int:
        return int(ndimage.label(data[band.start : band.stop], structure=structure, output=labels[band.start : band.stop]))

    pool = executor or ThreadPoolExecutor(max_workers=len(bands))
    try:
        counts = list(pool.map(label_band, bands))
        offsets = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        total = int(offsets[-1])

        forest = UnionFind(total)
        touched: set[int] = set()
        for index in range(1, len(bands)):
            seam = bands[index].start
            for upper, lower in seam_pairs(labels[seam - 1], labels[seam], connectivity).tolist():
                a, b = upper + int(offsets[index - 1]) - 1, lower + int(offsets[index]) - 1
                forest.union(a, b)
                touched.update((a, b))
        table, count = _canonical_table(total, forest, touched)

        def relabel(item: Tuple[int, Band]) -> None:
            index, band = item
            local = np.concatenate([[0], table[offsets[index] + 1 : offsets[index + 1] + 1]]).astype(np.int32)
            view = labels[band.start : band.stop]
            np.take(local, view, out=view)

        list(pool.map(relabel, enumerate(bands)))
    finally:
        if executor is None:
            pool.shutdown()

    LOGGER.debug("Labeled %d bands, %d provisional ids, %d components", len(bands), total, count)
    return LabelMap(labels, count, check=False)


__all__ = [
    "CONNECTIVITIES",
    "Band",
    "split_bands",
    "seam_pairs",
    "label_components",
    "label_components_parallel",
]
