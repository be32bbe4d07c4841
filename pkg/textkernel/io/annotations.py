"""Comma-separated polygon annotations (one text instance per line).

A line holds integer coordinates ``x1,y1,...,xn,yn`` optionally followed by
free text (a transcription, ``###`` or a score). Parsing stops at the first
field that is not an integer; everything after it is ignored.
"""
from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

from textkernel.core.errors import DataFormatError, InputOutputError
from textkernel.geometry.polygon import Polygon
from textkernel.io.files import atomic_write_text
from textkernel.postprocess.pipeline import Detection

LOGGER = logging.getLogger(__name__)

_INTEGER = re.compile(r"^[+-]?\d+$")


class AnnotationParseError(DataFormatError):
    def __init__(self, message: str, *, path: Optional[Path] = None, line: Optional[int] = None) -> None:
        location = f"{path if path is not None else '<text>'}:{line}" if line is not None else str(path or "<text>")
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line = line


def parse_line(text: str) -> Optional[Polygon]:
    """Parse one line; returns ``None`` for blank lines."""

    stripped = text.strip()
    if not stripped:
        return None
    coords: List[int] = []
    for field in stripped.split(","):
        token = field.strip()
        if not _INTEGER.match(token):
            break
        coords.append(int(token))
    if len(coords) % 2:
        raise ValueError(f"odd coordinate count ({len(coords)})")
    if len(coords) < 6:
        raise ValueError(f"need at least 3 points, got {len(coords) // 2}")
    return Polygon.from_points(zip(coords[0::2], coords[1::2]))


def parse_annotation_text(text: str, *, strict: bool = True, path: Optional[Path] = None) -> List[Polygon]:
    polygons: List[Polygon] = []
    for number, line in enumerate(text.splitlines(), start=1):
        try:
            poly = parse_line(line)
        except ValueError as exc:
            if strict:
                raise AnnotationParseError(str(exc), path=path, line=number) from exc
            LOGGER.warning("Skipping %s:%d: %s", path or "<text>", number, exc)
            continue
        if poly is not None:
            polygons.append(poly)
    return polygons


def parse_annotations(path: str | Path, *, strict: bool = True) -> List[Polygon]:
    """Read one annotation file; strict mode fails on the first malformed line."""

    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise InputOutputError(f"Cannot read annotations {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise AnnotationParseError(f"not valid UTF-8 ({exc.reason})", path=path) from exc
    return parse_annotation_text(text, strict=strict, path=path)


def list_annotation_files(directory: str | Path, suffix: str = ".txt") -> List[Path]:
    directory = Path(directory)
    if not directory.is_dir():
        raise InputOutputError(f"Annotation directory {directory} does not exist.")
    return sorted(p for p in directory.iterdir() if p.is_file() and p.suffix == suffix)


def format_polygon(poly: Polygon) -> str:
    return ",".join(str(int(round(v))) for v in poly.flat_coordinates())


def format_detection(det: Detection) -> str:
    return f"{format_polygon(det.polygon)},{det.score:.6f}"


def write_polygons(path: str | Path, polygons: Iterable[Polygon]) -> Path:
    return atomic_write_text(path, "".join(f"{format_polygon(p)}\n" for p in polygons))


def write_detections(path: str | Path, detections: Sequence[Detection]) -> Path:
    target = atomic_write_text(path, "".join(f"{format_detection(d)}\n" for d in detections))
    LOGGER.info("Wrote %d detections to %s", len(detections), target)
    return target


__all__ = [
    "AnnotationParseError",
    "parse_line",
    "parse_annotation_text",
    "parse_annotations",
    "list_annotation_files",
    "format_polygon",
    "format_detection",
    "write_polygons",
    "write_detections",
]
