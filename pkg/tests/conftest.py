"""
Shared fixtures for the Hyperpower Inverse Toolkit tests
"""

import numpy as np
import pytest

from src.linalg.scalar import DOUBLE, extended
from src.utils.config_simple import reset_config


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    """Every test starts from default settings, whatever the shell exports."""
    for name in ("HYPERINV_THREADS", "HYPERINV_ITERATION_MAX_LOOPS", "HYPERINV_KRYLOV_CHOP_THRESHOLD"):
        monkeypatch.delenv(name, raising=False)
    reset_config()
    yield
    reset_config()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def double():
    return DOUBLE


@pytest.fixture
def precise():
    """Forty digits: enough headroom for oracle comparisons, still fast."""
    return extended(40)
