"""
Tests for matrix generators
"""

from fractions import Fraction

import numpy as np
import pytest

from src.linalg.generators import (
    DRAZIN_EXAMPLE_INDEX,
    drazin_example_matrix,
    hilbert,
    random_dense,
    tridiagonal_toeplitz,
)
from src.linalg.norms import rank


def test_hilbert_entries(precise):
    h = hilbert(3, 2, precise)
    assert h.shape == (3, 2)
    assert h.entry(2, 1) == precise.rational(1, 4)
    assert hilbert(2, 2).entry(0, 1) == 0.5
    with pytest.raises(ValueError):
        hilbert(0, 2)


def test_drazin_matrix_is_exact(precise):
    a = drazin_example_matrix(precise)
    assert a.shape == (12, 12)
    assert a.entry(0, 1) == precise.scalar(Fraction(2, 5))
    assert a.entry(11, 11) == 2


def test_drazin_matrix_is_singular():
    a = drazin_example_matrix()
    assert rank(a) < 12
    assert DRAZIN_EXAMPLE_INDEX == 3


def test_random_dense_is_seeded():
    first = random_dense(3, 3, np.random.default_rng(5))
    second = random_dense(3, 3, np.random.default_rng(5))
    assert np.array_equal(first.to_numpy(), second.to_numpy())


def test_tridiagonal():
    t = tridiagonal_toeplitz(4).to_numpy()
    assert t[1, 1] == 2 and t[1, 0] == -1 and t[0, 2] == 0
