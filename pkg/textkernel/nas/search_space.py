"""Architecture data model: four stages of learnable blocks over a four-op candidate set."""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Mapping, Sequence, Tuple, Union

import numpy as np

from textkernel.core.errors import DataFormatError

DEFAULT_CHANNELS = (64, 128, 256, 512)
DEFAULT_PARTITION = (9, 9, 9, 9)
STAGE_COUNT = 4


class CandidateOp(str, Enum):
    CONV3X3 = "conv3x3"
    CONV1X3 = "conv1x3"
    CONV3X1 = "conv3x1"
    IDENTITY = "identity"

    @property
    def is_asymmetric(self) -> bool:
        return self in (CandidateOp.CONV1X3, CandidateOp.CONV3X1)


CANDIDATE_OPS: Tuple[CandidateOp, ...] = tuple(CandidateOp)


class InvalidPartitionError(DataFormatError):
    """Block partition is not four non-negative counts with a positive sum."""


def validate_partition(partition: Sequence[int]) -> Tuple[int, ...]:
    values = tuple(int(v) for v in partition)
    if len(values) != STAGE_COUNT:
        raise InvalidPartitionError(f"Partition needs {STAGE_COUNT} stage counts, got {len(values)}.")
    if any(v < 0 for v in values):
        raise InvalidPartitionError(f"Stage block counts must be >= 0, got {values}.")
    if sum(values) < 1:
        raise InvalidPartitionError("Partition must contain at least one learnable block.")
    return values


@dataclass(frozen=True)
class Stage:
    ops: Tuple[CandidateOp, ...]
    channels: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(CandidateOp(op) for op in self.ops))
        if self.channels < 1:
            raise DataFormatError(f"Stage channels must be positive, got {self.channels}.")

    @property
    def block_count(self) -> int:
        return len(self.ops)


@dataclass(frozen=True)
class Architecture:
    stages: Tuple[Stage, ...]

    def __post_init__(self) -> None:
        if len(self.stages) != STAGE_COUNT:
            raise DataFormatError(f"Architecture needs {STAGE_COUNT} stages, got {len(self.stages)}.")

    @property
    def partition(self) -> Tuple[int, ...]:
        return tuple(stage.block_count for stage in self.stages)

    @property
    def total_blocks(self) -> int:
        return sum(self.partition)

    @property
    def channels(self) -> Tuple[int, ...]:
        return tuple(stage.channels for stage in self.stages)

    def ops(self) -> Tuple[CandidateOp, ...]:
        return tuple(op for stage in self.stages for op in stage.ops)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "partition": list(self.partition),
            "channels": list(self.channels),
            "stages": [[op.value for op in stage.ops] for stage in self.stages],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Architecture":
        stages = data.get("stages") or []
        channels = data.get("channels") or DEFAULT_CHANNELS
        if len(stages) != STAGE_COUNT or len(channels) != STAGE_COUNT:
            raise DataFormatError("Architecture JSON needs four stages and four channel counts.")
        partition = data.get("partition")
        if partition is not None and list(partition) != [len(ops) for ops in stages]:
            raise InvalidPartitionError(f"Partition {partition} does not match stage lengths.")
        try:
            return cls(tuple(Stage(tuple(ops), int(c)) for ops, c in zip(stages, channels)))
        except ValueError as exc:
            raise DataFormatError(f"Invalid architecture description: {exc}") from exc

    def describe(self) -> str:
        return " | ".join(",".join(op.value for op in stage.ops) or "-" for stage in self.stages)


def search_space_size(blocks: int) -> int:
    """Number of architectures with ``blocks`` learnable blocks: ``4 ** blocks``."""

    if int(blocks) != blocks or blocks < 1:
        raise ValueError(f"Block count must be a positive integer, got {blocks}.")
    return len(CANDIDATE_OPS) ** int(blocks)


def sample_architecture(
    seed: Union[int, np.random.Generator, None],
    partition: Sequence[int] = DEFAULT_PARTITION,
    channels: Sequence[int] = DEFAULT_CHANNELS,
) -> Architecture:
    """Draw every block's op uniformly and independently; deterministic for a given seed."""

    counts = validate_partition(partition)
    if len(channels) != STAGE_COUNT:
        raise InvalidPartitionError(f"Need {STAGE_COUNT} channel counts, got {len(channels)}.")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draws = rng.integers(0, len(CANDIDATE_OPS), size=sum(counts))
    stages = []
    cursor = 0
    for count, width in zip(counts, channels):
        ops = tuple(CANDIDATE_OPS[i] for i in draws[cursor : cursor + count])
        stages.append(Stage(ops=ops, channels=int(width)))
        cursor += count
    return Architecture(tuple(stages))


def effective_depth(arch: Architecture) -> int:
    """Blocks that are not skipped."""

    return sum(1 for op in arch.ops() if op is not CandidateOp.IDENTITY)


__all__ = [
    "DEFAULT_CHANNELS",
    "DEFAULT_PARTITION",
    "CandidateOp",
    "CANDIDATE_OPS",
    "InvalidPartitionError",
    "validate_partition",
    "Stage",
    "Architecture",
    "search_space_size",
    "sample_architecture",
    "effective_depth",
]
