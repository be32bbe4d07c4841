"""Convenience script to run textkernel using ``python textkernel.py``."""
from __future__ import annotations

from textkernel.cli import main


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
