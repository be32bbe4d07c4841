"""Tests for the polygon annotation format."""
from __future__ import annotations

import logging
from pathlib import Path

import pytest

from textkernel.core.errors import InputOutputError
from textkernel.geometry.polygon import Polygon
from textkernel.io.annotations import (
    AnnotationParseError,
    list_annotation_files,
    parse_annotation_text,
    parse_annotations,
    parse_line,
    write_detections,
    write_polygons,
)
from textkernel.postprocess import Detection


def test_parse_basic_lines() -> None:
    polygons = parse_annotation_text("0,0,10,0,10,5,0,5\n\n1,1,4,1,4,4,1,4\n")

    assert len(polygons) == 2
    assert polygons[0].points == ((0.0, 0.0), (10.0, 0.0), (10.0, 5.0), (0.0, 5.0))


def test_trailing_text_is_ignored() -> None:
    assert parse_line("0,0,8,0,8,8,0,8,###") == parse_line("0,0,8,0,8,8,0,8")
    assert parse_line(" 0, 0, 8, 0, 8, 8 ,hello, 3, 4") == Polygon.from_points([(0, 0), (8, 0), (8, 8)])
    assert parse_line("0,0,8,0,8,8,0,8,0.875000").area == 64.0
    assert parse_line("   ") is None


def test_negative_coordinates_are_integers() -> None:
    assert parse_line("-2,-2,6,-2,6,3").bounds == (-2.0, -2.0, 6.0, 3.0)


@pytest.mark.parametrize("line", ["0,0,10,0,10", "0,0,10,0", "0,0,5,5,10,10", "a,b,c"])
def test_malformed_lines_raise(line: str) -> None:
    with pytest.raises(ValueError):
        parse_line(line)


def test_strict_mode_reports_line_number(tmp_path: Path) -> None:
    path = tmp_path / "img_0001.txt"
    path.write_text("0,0,10,0,10,10,0,10\n0,0,10,0,10\n", encoding="utf-8")

    with pytest.raises(AnnotationParseError) as excinfo:
        parse_annotations(path)

    assert excinfo.value.line == 2
    assert str(excinfo.value).startswith(f"{path}:2: odd coordinate count")
    assert excinfo.value.exit_code == 3


def test_lenient_mode_skips_and_warns(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING, logger="textkernel.io.annotations"):
        polygons = parse_annotation_text("0,0,10,0,10\n0,0,10,0,10,10\n", strict=False)

    assert len(polygons) == 1
    assert "odd coordinate count" in caplog.text


def test_byte_order_mark_is_skipped(tmp_path: Path) -> None:
    path = tmp_path / "bom.txt"
    path.write_bytes("\ufeff0,0,6,0,6,6,0,6\r\n".encode("utf-8"))

    [poly] = parse_annotations(path)

    assert poly.area == 36.0


def test_missing_file_and_directory(tmp_path: Path) -> None:
    with pytest.raises(InputOutputError):
        parse_annotations(tmp_path / "absent.txt")
    with pytest.raises(InputOutputError):
        list_annotation_files(tmp_path / "absent")


def test_list_annotation_files_is_sorted(tmp_path: Path) -> None:
    for name in ("b.txt", "a.txt", "c.json"):
        (tmp_path / name).write_text("", encoding="utf-8")

    assert [p.name for p in list_annotation_files(tmp_path)] == ["a.txt", "b.txt"]


def test_written_files_parse_back(tmp_path: Path) -> None:
    polygons = [Polygon.from_points([(1, 2), (9, 2), (9, 7)]), Polygon.from_points([(0, 0), (4, 0), (4, 4), (0, 4)])]
    detections = [Detection(polygon=p, score=0.25 * (i + 1), label=i + 1) for i, p in enumerate(polygons)]

    write_polygons(tmp_path / "gt.txt", polygons)
    write_detections(tmp_path / "out" / "det.txt", detections)

    assert parse_annotations(tmp_path / "gt.txt") == polygons
    assert parse_annotations(tmp_path / "out" / "det.txt") == polygons
    assert (tmp_path / "out" / "det.txt").read_text(encoding="utf-8").splitlines()[0] == "1,2,9,2,9,7,0.250000"
