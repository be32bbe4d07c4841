"""Accuracy/speed reward used to rank candidate architectures."""
from __future__ import annotations

import math
from dataclasses import dataclass

# Named speed targets (frames per second) for the small/medium/large searches.
FPS_TARGETS = {"A0": 100.0, "A1": 80.0, "A2": 60.0}


@dataclass(frozen=True)
class RewardParams:
    target_fps: float
    alpha: float = 0.5
    w: float = 0.1

    def __post_init__(self) -> None:
        if not math.isfinite(self.target_fps) or self.target_fps <= 0:
            raise ValueError(f"target_fps must be positive, got {self.target_fps}.")
        if not math.isfinite(self.w) or self.w < 0:
            raise ValueError(f"w must be >= 0, got {self.w}.")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite.")


@dataclass(frozen=True)
class ModelMetrics:
    iou_k: float
    iou_t: float
    fps: float

    def __post_init__(self) -> None:
        for name in ("iou_k", "iou_t"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}.")
        if not math.isfinite(self.fps) or self.fps <= 0:
            raise ValueError(f"fps must be positive, got {self.fps}.")

    def to_dict(self) -> dict:
        return {"iou_k": self.iou_k, "iou_t": self.iou_t, "fps": self.fps}


def reward(metrics: ModelMetrics, params: RewardParams) -> float:
    """``(IoU_k + alpha * IoU_t) * (FPS / T) ** w``."""

    accuracy = metrics.iou_k + params.alpha * metrics.iou_t
    return accuracy * (metrics.fps / params.target_fps) ** params.w


__all__ = ["FPS_TARGETS", "RewardParams", "ModelMetrics", "reward"]
