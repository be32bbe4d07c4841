"""Seeded random search over the block search space."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from textkernel.core.errors import TextKernelError
from textkernel.nas.oracles import MetricsOracle
from textkernel.nas.reward import ModelMetrics, RewardParams, reward
from textkernel.nas.search_space import (
    DEFAULT_CHANNELS,
    DEFAULT_PARTITION,
    Architecture,
    sample_architecture,
)

LOGGER = logging.getLogger(__name__)


class OracleError(TextKernelError):
    category = "oracle"
    exit_code = 4


@dataclass(frozen=True)
class TraceEntry:
    index: int
    architecture: Architecture
    metrics: ModelMetrics
    reward: float

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "architecture": self.architecture.to_dict(),
            "metrics": self.metrics.to_dict(),
            "reward": self.reward,
        }


@dataclass(frozen=True)
class SearchResult:
    best: Architecture
    best_reward: float
    trace: Tuple[TraceEntry, ...]

    @property
    def best_entry(self) -> TraceEntry:
        return max(self.trace, key=lambda entry: (entry.reward, -entry.index))


def _evaluate(oracle: MetricsOracle, index: int, arch: Architecture) -> ModelMetrics:
    try:
        return oracle.evaluate(arch)
    except Exception as exc:
        raise OracleError(f"Oracle failed on architecture #{index} [{arch.describe()}]: {exc}") from exc


def random_search(
    oracle: MetricsOracle,
    params: RewardParams,
    budget: int,
    seed: int,
    partition: Sequence[int] = DEFAULT_PARTITION,
    channels: Sequence[int] = DEFAULT_CHANNELS,
    workers: int = 1,
) -> SearchResult:
    """Sample ``budget`` architectures, score them, keep the best (earliest wins ties).

    Architectures are drawn sequentially from one generator, so the trace is
    the same for any ``workers`` value.
    """

    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}.")
    rng = np.random.default_rng(seed)
    candidates: List[Architecture] = [sample_architecture(rng, partition, channels) for _ in range(budget)]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            metrics = list(pool.map(lambda item: _evaluate(oracle, *item), enumerate(candidates)))
    else:
        metrics = [_evaluate(oracle, index, arch) for index, arch in enumerate(candidates)]

    trace: List[TraceEntry] = []
    best_index = 0
    for index, (arch, measured) in enumerate(zip(candidates, metrics)):
        trace.append(TraceEntry(index=index, architecture=arch, metrics=measured, reward=reward(measured, params)))
        if trace[-1].reward > trace[best_index].reward:
            best_index = index

    best = trace[best_index]
    LOGGER.info("Random search over %d candidates: best #%d reward=%.6f", budget, best.index, best.reward)
    return SearchResult(best=best.architecture, best_reward=best.reward, trace=tuple(trace))


__all__ = ["OracleError", "TraceEntry", "SearchResult", "random_search"]
