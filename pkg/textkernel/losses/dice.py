"""Dice losses for kernel and text maps, OHEM selection and the combined loss.

Prediction maps are expected in [0, 1]; squashing (e.g. a sigmoid) is the
caller's business.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from textkernel.core.errors import DataFormatError, require_same_shape
from textkernel.morphology.ops import soft_dilate_vjp
from textkernel.postprocess.pipeline import training_forward


class ZeroDenominatorError(DataFormatError):
    """Dice gradient requested where prediction and ground truth are both empty."""


@dataclass(frozen=True)
class LossWeights:
    alpha: float = 0.5

    def __post_init__(self) -> None:
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise ValueError(f"alpha must be finite and >= 0, got {self.alpha}.")


@dataclass(frozen=True)
class LossTerms:
    kernel: float
    text: float
    total: float


def _prepare(pred: np.ndarray, gt: np.ndarray, selection: Optional[np.ndarray]):
    p = np.asarray(pred, dtype=np.float64)
    g = np.asarray(gt, dtype=bool).astype(np.float64)
    sel = np.ones(p.shape, dtype=bool) if selection is None else np.asarray(selection, dtype=bool)
    require_same_shape(p, g, sel, names=("prediction", "ground truth", "selection"))
    return p, g, sel


def _dice_sums(p: np.ndarray, g: np.ndarray, sel: np.ndarray) -> tuple[float, float]:
    ps, gs = p[sel], g[sel]
    return float(np.sum(ps * gs)), float(np.sum(ps * ps) + np.sum(gs * gs))


def dice_loss(pred: np.ndarray, gt: np.ndarray, selection: Optional[np.ndarray] = None) -> float:
    """``1 - 2 sum(P G) / (sum P^2 + sum G^2)`` over selected pixels; 0 when both sums vanish."""

    p, g, sel = _prepare(pred, gt, selection)
    numerator, denominator = _dice_sums(p, g, sel)
    if denominator == 0.0:
        return 0.0
    return 1.0 - 2.0 * numerator / denominator


def dice_loss_grad(pred: np.ndarray, gt: np.ndarray, selection: Optional[np.ndarray] = None) -> np.ndarray:
    """Analytic derivative of :func:`dice_loss` w.r.t. each prediction pixel."""

    p, g, sel = _prepare(pred, gt, selection)
    numerator, denominator = _dice_sums(p, g, sel)
    if denominator == 0.0:
        raise ZeroDenominatorError("Dice gradient is undefined when prediction and ground truth are empty.")
    grad = -2.0 * (g * denominator - 2.0 * p * numerator) / (denominator * denominator)
    return np.where(sel, grad, 0.0)


def ohem_select(text_pred: np.ndarray, text_gt: np.ndarray, ratio: float = 3.0) -> np.ndarray:
    """All positives plus the ``floor(ratio * positives)`` highest-scoring negatives.

    Ties among negatives go to the lowest row-major index. Without positives
    every pixel is selected.
    """

    if not ratio > 0:
        raise ValueError(f"OHEM ratio must be positive, got {ratio}.")
    p = np.asarray(text_pred, dtype=np.float64)
    positives = np.asarray(text_gt, dtype=bool)
    require_same_shape(p, positives, names=("prediction", "ground truth"))
    n_pos = int(np.count_nonzero(positives))
    if n_pos == 0:
        return np.ones(p.shape, dtype=bool)

    selection = positives.copy()
    negatives = np.flatnonzero(~positives.ravel())
    budget = math.floor(ratio * n_pos)
    if budget >= negatives.size:
        selection[:] = True
        return selection
    if budget > 0:
        order = np.argsort(-p.ravel()[negatives], kind="stable")
        selection.ravel()[negatives[order[:budget]]] = True
    return selection


def combine_losses(kernel_term: float, text_term: float, weights: LossWeights = LossWeights()) -> float:
    return kernel_term + weights.alpha * text_term


def loss_terms(
    kernel_pred: np.ndarray,
    kernel_gt: np.ndarray,
    text_pred: np.ndarray,
    text_gt: np.ndarray,
    weights: LossWeights = LossWeights(),
    ratio: float = 3.0,
) -> LossTerms:
    kernel = dice_loss(kernel_pred, kernel_gt)
    text = dice_loss(text_pred, text_gt, ohem_select(text_pred, text_gt, ratio))
    return LossTerms(kernel=kernel, text=text, total=combine_losses(kernel, text, weights))


def total_loss(
    kernel_pred: np.ndarray,
    kernel_gt: np.ndarray,
    text_pred: np.ndarray,
    text_gt: np.ndarray,
    weights: LossWeights = LossWeights(),
    ratio: float = 3.0,
) -> float:
    """``L_ker + alpha * L_tex``; the kernel term uses every pixel, the text term OHEM."""

    return loss_terms(kernel_pred, kernel_gt, text_pred, text_gt, weights, ratio).total


def supervision_gradient(
    kernel_pred: np.ndarray,
    kernel_gt: np.ndarray,
    text_gt: np.ndarray,
    s: int,
    weights: LossWeights = LossWeights(),
    ratio: float = 3.0,
    selection: Optional[np.ndarray] = None,
) -> tuple[float, np.ndarray]:
    """Total loss and its gradient w.r.t. the kernel map.

    The text map is ``training_forward(kernel_pred, s)``; the text-term gradient
    flows back through the window maximum. The OHEM selection is treated as a
    constant (pass ``selection`` to pin it).
    """

    text_pred = training_forward(kernel_pred, s)
    if selection is None:
        selection = ohem_select(text_pred, text_gt, ratio)
    kernel_term = dice_loss(kernel_pred, kernel_gt)
    text_term = dice_loss(text_pred, text_gt, selection)
    grad = dice_loss_grad(kernel_pred, kernel_gt)
    if weights.alpha:
        grad = grad + weights.alpha * soft_dilate_vjp(kernel_pred, s, dice_loss_grad(text_pred, text_gt, selection))
    return combine_losses(kernel_term, text_term, weights), grad


__all__ = [
    "ZeroDenominatorError",
    "LossWeights",
    "LossTerms",
    "dice_loss",
    "dice_loss_grad",
    "ohem_select",
    "combine_losses",
    "loss_terms",
    "total_loss",
    "supervision_gradient",
]
