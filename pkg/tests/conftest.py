"""Shared pytest setup: repo root on sys.path and a seeded generator."""
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240521)
