"""Stage timing ledger for the post-processing pipeline and reports."""
from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional

# Report keys that are always present, in this order.
STANDARD_STAGES = ("parse", "ccl", "dilate", "contour", "total")


@dataclass
class StageRecord:
    """One timed stage; ``status`` is ``running``, ``succeeded`` or ``failed``."""

    name: str
    status: str
    started_at: float
    elapsed_ms: float = 0.0
    metadata: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "status": self.status,
            "elapsed_ms": round(self.elapsed_ms, 6),
            "metadata": self.metadata,
            "error": self.error,
        }


class TimingLedger:
    """Accumulate wall-clock time per named stage."""

    def __init__(self, *, clock: Callable[[], float] | None = None, history_limit: int = 256) -> None:
        self._clock = clock or time.perf_counter
        self._totals: Dict[str, float] = {}
        self._history: List[StageRecord] = []
        self._history_limit = max(0, history_limit)

    @contextmanager
    def stage(self, name: str, metadata: Optional[Dict[str, Any]] = None) -> Iterator[StageRecord]:
        record = StageRecord(name=name, status="running", started_at=self._clock(), metadata=dict(metadata or {}))
        try:
            yield record
        except Exception as exc:
            self._finish(record, status="failed", error=str(exc))
            raise
        else:
            self._finish(record, status="succeeded")

    def add(self, name: str, elapsed_ms: float) -> None:
        if elapsed_ms < 0:
            raise ValueError(f"Stage '{name}' cannot take negative time.")
        self._totals[name] = self._totals.get(name, 0.0) + elapsed_ms

    def merge(self, other: "TimingLedger") -> None:
        for name, value in other.totals().items():
            self.add(name, value)

    def totals(self) -> Dict[str, float]:
        return dict(self._totals)

    def history(self) -> List[Dict[str, Any]]:
        return [record.to_dict() for record in self._history]

    def breakdown(self) -> Dict[str, float]:
        """Standard stages first (zero when unused), then any extra stages by name."""

        report = {name: round(self._totals.get(name, 0.0), 6) for name in STANDARD_STAGES}
        for name in sorted(set(self._totals) - set(STANDARD_STAGES)):
            report[name] = round(self._totals[name], 6)
        return report

    def _finish(self, record: StageRecord, *, status: str, error: Optional[str] = None) -> None:
        record.elapsed_ms = max(0.0, (self._clock() - record.started_at) * 1000.0)
        record.status = status
        record.error = error
        self.add(record.name, record.elapsed_ms)
        self._history.append(record)
        if self._history_limit and len(self._history) > self._history_limit:
            self._history = self._history[-self._history_limit :]


__all__ = ["STANDARD_STAGES", "StageRecord", "TimingLedger"]
