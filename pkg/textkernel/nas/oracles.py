"""Metric providers for the architecture search.

The stub oracle is synthetic: its numbers only have the right monotone shape
(deeper is more accurate and slower, asymmetric convolutions help a little).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

from textkernel.nas.reward import ModelMetrics
from textkernel.nas.search_space import Architecture, effective_depth


class MetricsOracle(Protocol):
    def evaluate(self, arch: Architecture) -> ModelMetrics:  # pragma: no cover - protocol
        ...


@dataclass(frozen=True)
class ConstantOracle:
    metrics: ModelMetrics

    def evaluate(self, arch: Architecture) -> ModelMetrics:
        return self.metrics


@dataclass(frozen=True)
class StubOracle:
    """Saturating accuracy and affine latency in the number of active blocks."""

    kernel_ceiling: float = 0.85
    text_ceiling: float = 0.9
    depth_scale: float = 12.0
    asymmetric_bonus: float = 0.002
    base_latency_ms: float = 4.0
    latency_per_block_ms: float = 0.25
    fps_scale: float = 1.0

    def evaluate(self, arch: Architecture) -> ModelMetrics:
        depth = effective_depth(arch)
        asymmetric = sum(1 for op in arch.ops() if op.is_asymmetric)
        saturation = 1.0 - math.exp(-depth / self.depth_scale)
        bonus = self.asymmetric_bonus * asymmetric
        iou_k = min(1.0, self.kernel_ceiling * saturation + bonus)
        iou_t = min(1.0, self.text_ceiling * saturation + bonus)
        latency_ms = self.base_latency_ms + self.latency_per_block_ms * depth
        return ModelMetrics(iou_k=iou_k, iou_t=iou_t, fps=self.fps_scale * 1000.0 / latency_ms)


__all__ = ["MetricsOracle", "ConstantOracle", "StubOracle"]
