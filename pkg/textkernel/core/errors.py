"""Exception hierarchy shared by the library and the command line."""
from __future__ import annotations


class TextKernelError(RuntimeError):
    """Base error; ``category`` and ``exit_code`` drive the CLI error report."""

    category = "internal"
    exit_code = 1


class UsageError(TextKernelError):
    category = "usage"
    exit_code = 1


class InputOutputError(TextKernelError):
    category = "io"
    exit_code = 2


class DataFormatError(TextKernelError, ValueError):
    category = "data-format"
    exit_code = 3


class VerificationError(TextKernelError):
    category = "verification"
    exit_code = 4


class DimensionMismatchError(DataFormatError):
    """Two images that must share a shape do not."""


def require_same_shape(*arrays: object, names: tuple[str, ...] = ()) -> None:
    shapes = [getattr(array, "shape", None) for array in arrays]
    if len(set(shapes)) > 1:
        label = ", ".join(names) if names else "inputs"
        raise DimensionMismatchError(f"Shape mismatch between {label}: {shapes}")


__all__ = [
    "TextKernelError",
    "UsageError",
    "InputOutputError",
    "DataFormatError",
    "VerificationError",
    "DimensionMismatchError",
    "require_same_shape",
]
