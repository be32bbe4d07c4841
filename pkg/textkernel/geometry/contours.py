"""Outer boundary extraction for labeled components."""
from __future__ import annotations

import logging
from bisect import bisect_left, bisect_right
from collections import defaultdict
from typing import Dict, List, Tuple

import numpy as np
from scipy import ndimage

from textkernel.ccl.label_map import LabelMap
from textkernel.geometry.polygon import Polygon

LOGGER = logging.getLogger(__name__)

# Clockwise on screen (y grows downwards): E, S, W, N.
_STEPS = ((1, 0), (0, 1), (-1, 0), (0, -1))

# Corner code bits: pixels top-left, top-right, bottom-left, bottom-right.
_TL, _TR, _BL, _BR = 1, 2, 4, 8


def _leaves(code: int, direction: int) -> bool:
    """Whether a boundary edge (inside on its right) leaves a corner with ``code``."""

    inside = {bit: bool(code & bit) for bit in (_TL, _TR, _BL, _BR)}
    right, left = ((_BR, _TR), (_BL, _BR), (_TL, _BL), (_TR, _TL))[direction]
    return inside[right] and not inside[left]


def _build_turns() -> Tuple[Tuple[int, ...], ...]:
    table = []
    for code in range(16):
        row = []
        for direction in range(4):
            # Left turn first keeps diagonal (8-connected) neighbours on the outline.
            choice = next(
                ((direction + turn) % 4 for turn in (3, 0, 1) if _leaves(code, (direction + turn) % 4)),
                -1,
            )
            row.append(choice)
        table.append(tuple(row))
    return tuple(table)


_TURNS = _build_turns()
# Corners where the outline changes direction; 3, 5, 10 and 12 pass straight through.
_VERTEX_CODES = np.array([code not in (0, 3, 5, 10, 12, 15) for code in range(16)])


def _corner_codes(component: np.ndarray) -> np.ndarray:
    """Code of every pixel corner of ``component``, shape ``(h + 1, w + 1)``."""

    padded = np.pad(component, 1).astype(np.uint8)
    return padded[:-1, :-1] * _TL + padded[:-1, 1:] * _TR + padded[1:, :-1] * _BL + padded[1:, 1:] * _BR


def _trace_outer(component: np.ndarray, label: int) -> List[Tuple[int, int]]:
    """Corner vertices of the outline through the first pixel of ``component``.

    Coordinates are relative to the crop; the walk jumps from vertex to vertex
    along rows and columns.
    """

    codes = _corner_codes(component)
    ys, xs = np.nonzero(_VERTEX_CODES[codes])
    by_row: Dict[int, List[int]] = defaultdict(list)
    by_col: Dict[int, List[int]] = defaultdict(list)
    for vx, vy in zip(xs.tolist(), ys.tolist()):
        by_row[vy].append(vx)
        by_col[vx].append(vy)

    start_row, start_col = divmod(int(np.argmax(component.ravel())), component.shape[1])
    start = (start_col, start_row)
    x, y = start
    direction = 0
    vertices = [start]
    for _ in range(2 * xs.size + 2):
        if direction == 0:
            line = by_row[y]
            x = line[bisect_right(line, x)]
        elif direction == 2:
            line = by_row[y]
            x = line[bisect_left(line, x) - 1]
        elif direction == 1:
            line = by_col[x]
            y = line[bisect_right(line, y)]
        else:
            line = by_col[x]
            y = line[bisect_left(line, y) - 1]
        turn = _TURNS[int(codes[y, x])][direction]
        if turn < 0:  # pragma: no cover - impossible on a well-formed boundary
            raise RuntimeError(f"Boundary of component {label} is not closed at {(x, y)}.")
        if (x, y) == start and turn == 0:
            return vertices
        vertices.append((x, y))
        direction = turn
    raise RuntimeError(f"Boundary trace of component {label} did not terminate.")  # pragma: no cover


def trace_contours(labels: LabelMap) -> List[Tuple[int, Polygon]]:
    """Return one outer boundary polygon per component id, ordered by id.

    Boundaries run along pixel edges (corner coordinates are integers), so the
    pixel-center rasterization of a hole-free component's polygon reproduces
    the component exactly. This is Moore-neighbour tracing lifted from pixel
    centers to pixel corners; holes are ignored. A component split into
    pieces is outlined through its first pixel in row-major order.
    """

    if labels.count == 0:
        return []
    contours: List[Tuple[int, Polygon]] = []
    for index, window in enumerate(ndimage.find_objects(labels.labels, max_label=labels.count)):
        if window is None:
            continue
        label = index + 1
        component = labels.labels[window] == label
        top, left = window[0].start, window[1].start
        vertices = _trace_outer(component, label)
        contours.append((label, Polygon(tuple((float(vx + left), float(vy + top)) for vx, vy in vertices))))
    LOGGER.debug("Traced %d contours", len(contours))
    return contours


__all__ = ["trace_contours"]
