"""Binary container for masks and float maps.

Layout: ``b"FKM1"``, width and height as little-endian uint32, a one-byte
dtype tag, then the payload. Tag 0 stores a boolean mask as bit-packed rows
(most significant bit first, each row padded to a whole byte); tag 1 stores
little-endian float32 values in row-major order.
"""
from __future__ import annotations

import struct
from enum import IntEnum
from pathlib import Path

import numpy as np

from textkernel.core.errors import DataFormatError, InputOutputError
from textkernel.io.files import atomic_write_bytes

MAGIC = b"FKM1"
_HEADER = struct.Struct("<IIB")
HEADER_SIZE = len(MAGIC) + _HEADER.size


class MapFormatError(DataFormatError):
    pass


class MapDtype(IntEnum):
    MASK = 0
    FLOAT32 = 1


def _payload_size(width: int, height: int, dtype: MapDtype) -> int:
    if dtype is MapDtype.MASK:
        return height * ((width + 7) // 8)
    return width * height * 4


def encode_map(values: np.ndarray) -> bytes:
    """Booleans become tag 0; every other numeric array is stored as float32."""

    array = np.asarray(values)
    if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
        raise MapFormatError(f"Map must be a non-empty 2-D array, got shape {array.shape}.")
    height, width = array.shape
    if array.dtype == np.bool_:
        dtype = MapDtype.MASK
        payload = np.packbits(array, axis=1, bitorder="big").tobytes()
    else:
        dtype = MapDtype.FLOAT32
        payload = np.ascontiguousarray(array, dtype="<f4").tobytes()
    return MAGIC + _HEADER.pack(width, height, int(dtype)) + payload


def decode_map(blob: bytes) -> np.ndarray:
    if len(blob) < HEADER_SIZE or blob[: len(MAGIC)] != MAGIC:
        raise MapFormatError("Not a map file (bad magic).")
    width, height, tag = _HEADER.unpack_from(blob, len(MAGIC))
    try:
        dtype = MapDtype(tag)
    except ValueError as exc:
        raise MapFormatError(f"Unknown dtype tag {tag}.") from exc
    if width < 1 or height < 1:
        raise MapFormatError(f"Invalid map size {width}x{height}.")
    payload = blob[HEADER_SIZE:]
    expected = _payload_size(width, height, dtype)
    if len(payload) != expected:
        raise MapFormatError(f"Payload is {len(payload)} bytes, header implies {expected}.")
    if dtype is MapDtype.MASK:
        packed = np.frombuffer(payload, dtype=np.uint8).reshape(height, -1)
        return np.unpackbits(packed, axis=1, count=width, bitorder="big").astype(bool)
    return np.frombuffer(payload, dtype="<f4").reshape(height, width).copy()


def write_map(path: str | Path, values: np.ndarray) -> Path:
    return atomic_write_bytes(path, encode_map(values))


def read_map(path: str | Path) -> np.ndarray:
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise InputOutputError(f"Cannot read map {path}: {exc}") from exc
    try:
        return decode_map(blob)
    except MapFormatError as exc:
        raise MapFormatError(f"{path}: {exc}") from exc


__all__ = [
    "MAGIC",
    "HEADER_SIZE",
    "MapFormatError",
    "MapDtype",
    "encode_map",
    "decode_map",
    "write_map",
    "read_map",
]
