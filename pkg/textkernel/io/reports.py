"""JSON metrics reports with a fixed key order."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from textkernel.evaluation.prf import PRF, MatchCounts, prf_from_counts
from textkernel.io.files import atomic_write_text
from textkernel.state.timings import TimingLedger


def image_entry(name: str, counts: MatchCounts) -> Dict[str, Any]:
    return {"image": name, **counts.to_dict(), **prf_from_counts(counts).to_dict()}


def build_report(
    protocol: Mapping[str, Any],
    images: Sequence[Tuple[str, MatchCounts]],
    aggregate: PRF,
    timings: Optional[TimingLedger] = None,
) -> Dict[str, Any]:
    """``protocol``, ``images``, ``aggregate`` and, unless omitted, ``timings_ms``."""

    report: Dict[str, Any] = {
        "protocol": dict(protocol),
        "images": [image_entry(name, counts) for name, counts in images],
        "aggregate": aggregate.to_dict(),
    }
    if timings is not None:
        report["timings_ms"] = timings.breakdown()
    return report


def dumps_report(report: Mapping[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def dump_report(report: Mapping[str, Any], path: Optional[str | Path] = None) -> str:
    """Serialise ``report``; also write it atomically when ``path`` is given."""

    text = dumps_report(report)
    if path is not None:
        atomic_write_text(path, text)
    return text


__all__ = ["image_entry", "build_report", "dumps_report", "dump_report"]
