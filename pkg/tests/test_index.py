"""
Tests for matrix index detection
"""

import numpy as np
import pytest

from src.initialization.index import matrix_index
from src.linalg.dense import DenseMatrix, diag, from_rows, mat_pow, matmul, zeros
from src.linalg.generators import drazin_example_matrix, random_with_condition
from src.linalg.norms import inverse, rank
from src.utils.errors import ShapeError


def test_nonsingular_has_index_zero():
    result = matrix_index(diag([1.0, 2.0, 3.0]))
    assert result.index == 0
    assert result.rank_sequence == [3, 3]


def test_nilpotent_block():
    a = from_rows([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    result = matrix_index(a)
    assert result.index == 3
    assert result.rank_sequence == [3, 2, 1, 0, 0]


def test_zero_matrix_has_index_one():
    assert matrix_index(zeros(2, 2)).index == 1


def test_drazin_example_at_double_and_extended(precise):
    assert matrix_index(drazin_example_matrix()).index == 3
    assert matrix_index(drazin_example_matrix(precise)).index == 3


def test_rectangular_rejected():
    with pytest.raises(ShapeError):
        matrix_index(zeros(2, 3))


def test_jordan_block_of_size_two():
    result = matrix_index(from_rows([[0, 1], [0, 0]]))
    assert result.index == 2
    assert result.rank_sequence == [2, 1, 0, 0]


def shifted_block():
    """A unit eigenvalue next to a nilpotent block of size three: ranks 4, 3, 2, 1, 1."""
    return from_rows([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]])


def test_rank_of_powers_never_increases(rng):
    assert [rank(mat_pow(shifted_block(), k)) for k in range(5)] == [4, 3, 2, 1, 1]
    low_rank = DenseMatrix(rng.standard_normal((6, 2)) @ rng.standard_normal((2, 6)))
    for a in (drazin_example_matrix(), shifted_block(), low_rank):
        ranks = matrix_index(a).rank_sequence
        assert all(later <= earlier for earlier, later in zip(ranks, ranks[1:]))
        assert ranks[-1] == ranks[-2]


def block_diagonal(*blocks):
    n = sum(len(block) for block in blocks)
    out = np.zeros((n, n))
    start = 0
    for block in blocks:
        size = len(block)
        out[start:start + size, start:start + size] = block
        start += size
    return DenseMatrix(out)


@pytest.mark.parametrize("base, expected", [
    (block_diagonal([[0, 1, 0], [0, 0, 1], [0, 0, 0]], [[2]], [[3]]), 3),
    (block_diagonal([[0, 1], [0, 0]], [[1]], [[2]], [[0]]), 2),
    (diag([1.0, 2.0, 3.0, 0.0, 0.0]), 1),
    (diag([1.0, 2.0, 3.0, 4.0, 5.0]), 0),
])
def test_index_survives_similarity(rng, base, expected):
    assert matrix_index(base, tol=1e-8).index == expected
    for _ in range(3):
        p = random_with_condition(5, 5, 5.0, rng)
        similar = matmul(matmul(p, base), inverse(p))
        assert matrix_index(similar, tol=1e-8).index == expected


def integer_similarity(n, rng):
    """Unimodular P and its exact integer inverse."""
    lower = np.tril(rng.integers(-2, 3, (n, n)), -1) + np.eye(n)
    upper = np.triu(rng.integers(-2, 3, (n, n)), 1) + np.eye(n)
    p = lower @ upper
    return DenseMatrix(p), DenseMatrix(np.rint(np.linalg.inv(p)))


def test_nilpotent_index_survives_exact_similarity(rng):
    base = block_diagonal([[0, 1, 0], [0, 0, 1], [0, 0, 0]], [[0, 1], [0, 0]])
    assert matrix_index(base).rank_sequence == [5, 3, 1, 0, 0]
    for _ in range(3):
        p, p_inverse = integer_similarity(5, rng)
        similar = matmul(matmul(p, base), p_inverse)
        result = matrix_index(similar, tol=1e-8)
        assert result.index == 3
        assert result.rank_sequence == [5, 3, 1, 0, 0]
