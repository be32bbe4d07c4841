"""Square-window erosion/dilation, the max-pool dilation of text kernels, and its VJP.

All windows are ``s x s`` with stride 1 and padding ``s // 2``; outside the
image counts as background (``0`` for masks, ``-inf`` for real-valued maps,
which is what a padded max-pool does).
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy import ndimage

from textkernel.core.errors import require_same_shape


class DilationSize(int):
    """Odd positive window size."""

    def __new__(cls, value: int) -> "DilationSize":
        if isinstance(value, bool) or int(value) != value:
            raise ValueError(f"Dilation size must be an integer, got {value!r}.")
        value = int(value)
        if value < 1 or value % 2 == 0:
            raise ValueError(f"Dilation size must be odd and >= 1, got {value}.")
        return super().__new__(cls, value)

    @property
    def radius(self) -> int:
        return int(self) // 2

    @classmethod
    def coerce(cls, value: int) -> "DilationSize":
        """Nearest odd size >= 1; even values round up."""

        value = int(value)
        if value < 1:
            return cls(1)
        return cls(value if value % 2 else value + 1)


def window_max(values: np.ndarray, s: int, fill: float = 0) -> np.ndarray:
    """``s x s`` window maximum, stride 1, ``fill`` outside the image."""

    return ndimage.maximum_filter(values, size=DilationSize(s), mode="constant", cval=fill)


def window_min(values: np.ndarray, s: int, fill: float = 0) -> np.ndarray:
    """``s x s`` window minimum, stride 1, ``fill`` outside the image."""

    return ndimage.minimum_filter(values, size=DilationSize(s), mode="constant", cval=fill)


def erode(mask: np.ndarray, s: int) -> np.ndarray:
    """Pixel kept iff its whole window (zero padded) is set."""

    data = np.asarray(mask, dtype=bool).view(np.uint8)
    return window_min(data, s).astype(bool)


def dilate(mask: np.ndarray, s: int) -> np.ndarray:
    """Pixel set iff any pixel of its window is set."""

    data = np.asarray(mask, dtype=bool).view(np.uint8)
    return window_max(data, s).astype(bool)


def soft_dilate(values: np.ndarray, s: int) -> np.ndarray:
    """Window maximum of a real-valued map (``max_pool2d(x, s, 1, s // 2)``)."""

    data = np.asarray(values, dtype=np.float64)
    return window_max(data, s, -np.inf)


def window_argmax(values: np.ndarray, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Row and column of each window's maximum, ties to the lowest row-major index."""

    size = DilationSize(s)
    radius = size.radius
    data = np.asarray(values, dtype=np.float64)
    height, width = data.shape
    padded = np.pad(data, radius, mode="constant", constant_values=-np.inf)
    best = np.full(data.shape, -np.inf)
    best_row = np.zeros(data.shape, dtype=np.intp)
    best_col = np.zeros(data.shape, dtype=np.intp)
    rows, cols = np.indices(data.shape)
    for dy in range(size):
        for dx in range(size):
            candidate = padded[dy : dy + height, dx : dx + width]
            better = candidate > best
            best = np.where(better, candidate, best)
            best_row = np.where(better, rows + dy - radius, best_row)
            best_col = np.where(better, cols + dx - radius, best_col)
    return best_row, best_col


def soft_dilate_vjp(values: np.ndarray, s: int, upstream: np.ndarray) -> np.ndarray:
    """Route each upstream value to its window's argmax input pixel and sum."""

    data = np.asarray(values, dtype=np.float64)
    grad_out = np.asarray(upstream, dtype=np.float64)
    require_same_shape(data, grad_out, names=("map", "upstream"))
    rows, cols = window_argmax(data, s)
    grad = np.zeros_like(data)
    np.add.at(grad, (rows.ravel(), cols.ravel()), grad_out.ravel())
    return grad


def scale_dilation_size(new_short_side: float, default_short_side: float, default_size: int) -> int:
    """Rescale ``s`` proportionally to the test-time shorter side.

    ``Round(S_new * s_default / S_default)`` with halves rounded away from zero.
    The result may be even; wrap it in :meth:`DilationSize.coerce` before use.
    """

    args = (new_short_side, default_short_side, default_size)
    if any(not math.isfinite(value) or value <= 0 for value in args):
        raise ValueError(f"Dilation scaling needs positive inputs, got {args}.")
    ratio = Fraction(new_short_side) * Fraction(default_size) / Fraction(default_short_side)
    return math.floor(ratio + Fraction(1, 2))


__all__ = [
    "DilationSize",
    "window_max",
    "window_min",
    "erode",
    "dilate",
    "soft_dilate",
    "window_argmax",
    "soft_dilate_vjp",
    "scale_dilation_size",
]
