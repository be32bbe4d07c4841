"""Finite-difference verification of the loss stack."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from textkernel.losses.dice import (
    LossWeights,
    combine_losses,
    dice_loss,
    dice_loss_grad,
    ohem_select,
    supervision_gradient,
)
from textkernel.postprocess.pipeline import training_forward

LOGGER = logging.getLogger(__name__)

WORKED_EXAMPLE_LOSS = 1.0 - 3.0 / 3.25


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "worst": self.worst, "detail": self.detail}


def central_difference(fn: Callable[[np.ndarray], float], x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    base = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(base)
    shifted = base.copy()
    for index in np.ndindex(base.shape):
        original = shifted[index]
        shifted[index] = original + h
        upper = fn(shifted)
        shifted[index] = original - h
        lower = fn(shifted)
        shifted[index] = original
        grad[index] = (upper - lower) / (2.0 * h)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = max(float(np.linalg.norm(analytic)), float(np.linalg.norm(numeric)), 1e-12)
    return float(np.linalg.norm(analytic - numeric)) / scale


def tie_free_map(rng: np.random.Generator, shape: tuple[int, int]) -> np.ndarray:
    """Distinct values in (0.05, 0.95) separated by at least ``0.9 / size``."""

    size = shape[0] * shape[1]
    ranks = rng.permutation(size).reshape(shape)
    return 0.05 + 0.9 * (ranks + 0.5) / size


def _random_instance(rng: np.random.Generator, shape: tuple[int, int]):
    pred = rng.uniform(0.05, 0.95, size=shape)
    gt = rng.random(shape) < 0.4
    gt.flat[rng.integers(gt.size)] = True
    selection = gt | (rng.random(shape) < 0.7)
    return pred, gt, selection


def check_worked_example() -> CheckResult:
    pred = np.array([[1.0, 0.5], [0.0, 0.0]])
    gt = np.array([[1, 1], [0, 0]], dtype=bool)
    value = dice_loss(pred, gt)
    error = abs(value - WORKED_EXAMPLE_LOSS)
    return CheckResult("dice_worked_example", error < 1e-9, error, f"loss={value:.9f}")


def check_total_loss_arithmetic() -> CheckResult:
    value = combine_losses(0.2, 0.4, LossWeights(alpha=0.5))
    error = abs(value - 0.4)
    return CheckResult("total_loss_arithmetic", error < 1e-12, error, f"total={value!r}")


def check_dice_gradient(rng: np.random.Generator, instances: int, tolerance: float = 1e-4) -> CheckResult:
    worst = 0.0
    for _ in range(instances):
        shape = (int(rng.integers(2, 7)), int(rng.integers(2, 7)))
        pred, gt, selection = _random_instance(rng, shape)
        analytic = dice_loss_grad(pred, gt, selection)
        numeric = central_difference(lambda p: dice_loss(p, gt, selection), pred)
        worst = max(worst, relative_error(analytic, numeric))
    return CheckResult("dice_gradient_fd", worst < tolerance, worst, f"{instances} instances")


def check_dilation_chain(
    rng: np.random.Generator,
    instances: int,
    s: int = 3,
    tolerance: float = 1e-4,
    weights: LossWeights = LossWeights(),
    ratio: float = 3.0,
) -> CheckResult:
    worst = 0.0
    for _ in range(instances):
        shape = (int(rng.integers(4, 8)), int(rng.integers(4, 8)))
        pred = tie_free_map(rng, shape)
        kernel_gt = rng.random(shape) < 0.3
        kernel_gt.flat[rng.integers(kernel_gt.size)] = True
        text_gt = rng.random(shape) < 0.5
        text_gt |= kernel_gt
        selection = ohem_select(training_forward(pred, s), text_gt, ratio)
        _, analytic = supervision_gradient(pred, kernel_gt, text_gt, s, weights, ratio, selection=selection)
        numeric = central_difference(
            lambda p: supervision_gradient(p, kernel_gt, text_gt, s, weights, ratio, selection=selection)[0], pred
        )
        worst = max(worst, relative_error(analytic, numeric))
    return CheckResult("dilation_chain_fd", worst < tolerance, worst, f"{instances} instances, s={s}")


def check_ohem_counts(rng: np.random.Generator, instances: int, ratio: float = 3.0) -> CheckResult:
    failures = 0
    for _ in range(instances):
        shape = (int(rng.integers(3, 20)), int(rng.integers(3, 20)))
        pred = rng.random(shape)
        gt = rng.random(shape) < rng.uniform(0.02, 0.5)
        selection = ohem_select(pred, gt, ratio)
        positives = int(gt.sum())
        negatives = gt.size - positives
        expected = negatives if positives == 0 else min(math.floor(ratio * positives), negatives)
        chosen_negatives = int((selection & ~gt).sum())
        if not selection[gt].all() or chosen_negatives != expected:
            failures += 1
    return CheckResult("ohem_counts", failures == 0, float(failures), f"{instances} instances")


def run_loss_checks(
    seed: int = 0, instances: int = 100, alpha: float = 0.5, ohem_ratio: float = 3.0
) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    weights = LossWeights(alpha=alpha)
    results = [
        check_worked_example(),
        check_total_loss_arithmetic(),
        check_dice_gradient(rng, instances),
        check_dilation_chain(rng, instances, weights=weights, ratio=ohem_ratio),
        check_ohem_counts(rng, instances, ohem_ratio),
    ]
    for result in results:
        level = logging.INFO if result.passed else logging.ERROR
        LOGGER.log(level, "%s: %s (worst=%.3g)", result.name, "pass" if result.passed else "FAIL", result.worst)
    return results


__all__ = [
    "CheckResult",
    "central_difference",
    "relative_error",
    "tie_free_map",
    "run_loss_checks",
]
