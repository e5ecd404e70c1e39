# tests/conftest.py
from __future__ import annotations

import os
import random
from datetime import date
from pathlib import Path

import numpy as np
import pytest

from creditindex.config import Config
from creditindex.generate.synthetic import StressWindow, SyntheticConfig


# -----------------------------
# Global, deterministic seeding
# -----------------------------
@pytest.fixture(autouse=True, scope="session")
def _seed_everything() -> None:
    """
    Make tests deterministic across runs. If you need a different seed in a test,
    override locally.
    """
    seed = int(os.environ.get("PYTEST_SEED", "1234"))
    os.environ["PYTHONHASHSEED"] = str(seed)
    random.seed(seed)
    np.random.seed(seed)


# -----------------------------
# Path helpers
# -----------------------------
@pytest.fixture(scope="session")
def project_root() -> Path:
    """Repository root (where pyproject.toml lives)."""
    return Path(__file__).resolve().parents[1]


# -----------------------------
# Domain fixtures
# -----------------------------
@pytest.fixture
def config() -> Config:
    return Config()


@pytest.fixture
def calm_synth() -> SyntheticConfig:
    """Two calm months of synthetic trades."""
    return SyntheticConfig(seed=11, start=date(2023, 1, 2), end=date(2023, 2, 28))


@pytest.fixture
def stressed_synth() -> SyntheticConfig:
    """Three months with one stress month in the middle."""
    return SyntheticConfig(
        seed=5,
        start=date(2023, 1, 2),
        end=date(2023, 3, 31),
        bucket_spread=(0.07, 0.40, 0.40, 0.40, 0.40),
        stress_windows=(StressWindow(date(2023, 2, 1), date(2023, 2, 28), 8.0, 0.5),),
    )
