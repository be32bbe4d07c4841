"""Precision, recall and F-measure."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from textkernel.evaluation.matching import MatchResult


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f_measure: float

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f_measure": self.f_measure}


@dataclass(frozen=True)
class MatchCounts:
    """Raw counts; summing these across images gives micro-averaged scores."""

    matched: int = 0
    detections: int = 0
    ground_truths: int = 0

    def __add__(self, other: "MatchCounts") -> "MatchCounts":
        return MatchCounts(
            self.matched + other.matched,
            self.detections + other.detections,
            self.ground_truths + other.ground_truths,
        )

    @classmethod
    def from_match(cls, result: MatchResult, n_dets: int, n_gts: int) -> "MatchCounts":
        return cls(result.matched, n_dets, n_gts)

    def to_dict(self) -> dict:
        return {"matched": self.matched, "detections": self.detections, "ground_truths": self.ground_truths}


def prf_from_counts(counts: MatchCounts) -> PRF:
    """Empty detection sets score precision 1; empty ground truth scores recall 1."""

    if counts.matched > min(counts.detections, counts.ground_truths):
        raise ValueError(f"Inconsistent counts: {counts}.")
    precision = counts.matched / counts.detections if counts.detections else 1.0
    recall = counts.matched / counts.ground_truths if counts.ground_truths else 1.0
    total = precision + recall
    f_measure = 2.0 * precision * recall / total if total > 0 else 0.0
    return PRF(precision, recall, f_measure)


def compute_prf(result: MatchResult, n_dets: int, n_gts: int) -> PRF:
    return prf_from_counts(MatchCounts.from_match(result, n_dets, n_gts))


def aggregate(counts: Iterable[MatchCounts]) -> MatchCounts:
    total = MatchCounts()
    for item in counts:
        total = total + item
    return total


__all__ = ["PRF", "MatchCounts", "prf_from_counts", "compute_prf", "aggregate"]
