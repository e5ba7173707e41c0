"""
Matrix Generators for Hyperpower Inverse Toolkit
Hilbert, the index-3 Drazin test matrix and seeded random instances
"""

from fractions import Fraction

import numpy as np

from src.linalg.dense import DenseMatrix
from src.linalg.scalar import DOUBLE, ScalarConfig

# Rows of the 12x12 index-3 test matrix; 0.4 is kept as the ratio 2/5.
_F = Fraction(2, 5)
_DRAZIN_ROWS = [
    [2, _F, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-2, _F, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-1, -1, 1, -1, 0, 0, 0, 0, -1, 0, 0, 0],
    [-1, -1, -1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, -1, -1, 0, 0, -1, 0],
    [0, 0, 0, 0, 1, 1, -1, -1, 0, 0, 0, 0],
    [0, 0, 0, -1, -2, _F, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 2, _F, 0, 0, 0, 0, 0, 0],
    [0, -1, 0, 0, 0, 0, 0, 0, 1, -1, -1, -1],
    [0, 0, 0, 0, 0, 0, 0, 0, -1, 1, -1, -1],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, _F, -2],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, _F, 2],
]

DRAZIN_EXAMPLE_INDEX = 3


def hilbert(m: int, n: int, config: ScalarConfig = DOUBLE) -> DenseMatrix:
    """m x n Hilbert matrix, entry (i, j) = 1/(i+j-1) with 1-based indices."""
    if m < 1 or n < 1:
        raise ValueError(f"Hilbert dimensions must be positive, got {m}x{n}")
    rows = [[config.rational(1, i + j - 1) for j in range(1, n + 1)] for i in range(1, m + 1)]
    return DenseMatrix(rows, config)


def drazin_example_matrix(config: ScalarConfig = DOUBLE) -> DenseMatrix:
    """The 12x12 singular test matrix of index 3 with exact rational entries."""
    return DenseMatrix([[config.scalar(Fraction(value)) for value in row] for row in _DRAZIN_ROWS], config)


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix from a QR factorization."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_with_condition(m: int, n: int, kappa: float, rng: np.random.Generator,
                          config: ScalarConfig = DOUBLE) -> DenseMatrix:
    """Full-rank m x n matrix with singular values log-spaced from 1 down to 1/kappa."""
    if kappa < 1:
        raise ValueError(f"condition number must be at least 1, got {kappa}")
    k = min(m, n)
    u = random_orthogonal(m, rng)[:, :k]
    v = random_orthogonal(n, rng)[:, :k]
    sigma = np.logspace(0.0, -np.log10(kappa), k)
    return DenseMatrix((u * sigma) @ v.T, config)


def random_dense(m: int, n: int, rng: np.random.Generator, low: float = -1.0, high: float = 1.0,
                 config: ScalarConfig = DOUBLE) -> DenseMatrix:
    """Uniform random entries in [low, high)."""
    return DenseMatrix(rng.uniform(low, high, size=(m, n)), config)


def tridiagonal_toeplitz(n: int, diagonal: float = 2.0, off: float = -1.0,
                         config: ScalarConfig = DOUBLE) -> DenseMatrix:
    """Constant-diagonal tridiagonal matrix (the 1-D Laplacian with the defaults)."""
    array = np.zeros((n, n))
    for i in range(n):
        array[i, i] = diagonal
        if i + 1 < n:
            array[i, i + 1] = off
            array[i + 1, i] = off
    return DenseMatrix(array, config)
