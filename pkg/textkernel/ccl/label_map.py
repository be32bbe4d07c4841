"""Integer label images: 0 is background, 1..count identify components."""
from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

from textkernel.core.errors import DataFormatError


@dataclass(frozen=True)
class LabelMap:
    """Label image in which every id in ``1..count`` occurs at least once.

    Producers that guarantee the invariant by construction pass
    ``check=False`` to skip the full-image scan.
    """

    labels: np.ndarray
    count: int
    check: InitVar[bool] = True

    def __post_init__(self, check: bool) -> None:
        labels = np.asarray(self.labels)
        if labels.ndim != 2:
            raise DataFormatError(f"Label map must be 2-D, got shape {labels.shape}.")
        if self.count < 0:
            raise DataFormatError(f"Label count must be >= 0, got {self.count}.")
        labels = labels.astype(np.int32, copy=False)
        object.__setattr__(self, "labels", labels)
        if not check:
            return
        if labels.size and (labels.min() < 0 or labels.max() > self.count):
            raise DataFormatError(f"Label ids must lie in 0..{self.count}.")
        present = np.bincount(labels.ravel(), minlength=self.count + 1)[1:] > 0
        if not present.all():
            missing = (np.flatnonzero(~present) + 1).tolist()
            raise DataFormatError(f"Label ids {missing[:10]} of 1..{self.count} do not occur.")

    @classmethod
    def empty(cls, width: int, height: int) -> "LabelMap":
        return cls(np.zeros((height, width), dtype=np.int32), 0, check=False)

    @property
    def width(self) -> int:
        return int(self.labels.shape[1])

    @property
    def height(self) -> int:
        return int(self.labels.shape[0])

    def binary(self) -> np.ndarray:
        return self.labels > 0

    def areas(self) -> np.ndarray:
        """Pixel count per id; index 0 holds the background area."""

        return np.bincount(self.labels.ravel(), minlength=self.count + 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelMap):
            return NotImplemented
        return self.count == other.count and np.array_equal(self.labels, other.labels)

    __hash__ = None  # type: ignore[assignment]


__all__ = ["LabelMap"]
