"""
Built-in Test Systems for Hyperpower Inverse Toolkit
"""

from typing import Optional

import numpy as np
import scipy.sparse as sp

from src.krylov.sparse import SparseMatrix
from src.utils.config_simple import get_krylov_config

DEFAULT_SHIFT = complex(0.05, 0.5)


def shifted_laplacian(grid: Optional[int] = None, shift: complex = DEFAULT_SHIFT) -> SparseMatrix:
    """Five-point 2-D Laplacian on a grid x grid mesh plus shift * I.

    The default 29 x 29 mesh gives a complex system of dimension 841.
    """
    grid = get_krylov_config().grid_size if grid is None else grid
    if grid < 1:
        raise ValueError(f"grid size must be positive, got {grid}")
    one_d = sp.diags([-np.ones(grid - 1), 2 * np.ones(grid), -np.ones(grid - 1)], [-1, 0, 1])
    eye = sp.identity(grid)
    laplacian = sp.kron(one_d, eye) + sp.kron(eye, one_d)
    n = grid * grid
    return SparseMatrix((laplacian + shift * sp.identity(n)).astype(np.complex128))


def ones_rhs(n: int) -> np.ndarray:
    return np.ones(n, dtype=np.float64)


def random_rhs(n: int, seed: int) -> np.ndarray:
    """Right-hand side with standard normal entries drawn from a seeded generator."""
    return np.random.default_rng(seed).standard_normal(n)
