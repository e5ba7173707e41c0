"""
Approximate-Inverse Preconditioners for Hyperpower Inverse Toolkit
Hyperpower loops from the diagonal seed with chopping, plus the Jacobi baseline
"""

from typing import Optional

import numpy as np
import scipy.sparse as sp

from src.initialization.strategies import init_diagonal
from src.iteration.schemes import SchemeId, scheme_step
from src.krylov.sparse import SparseMatrix, densify, sparsify
from src.linalg.dense import MatmulCounter
from src.utils.config_simple import get_krylov_config
from src.utils.errors import DegenerateInputError, DivergenceError, ShapeError
from src.utils.logging_setup import get_logger

logger = get_logger(__name__)


def jacobi_preconditioner(a: SparseMatrix) -> SparseMatrix:
    """diag(1/a_ii) as a sparse matrix."""
    if a.rows != a.cols:
        raise ShapeError(f"Jacobi preconditioner needs a square matrix, got {a.rows}x{a.cols}")
    d = a.diagonal()
    zero = np.flatnonzero(d == 0)
    if zero.size:
        raise DegenerateInputError(f"diagonal entry {zero[0] + 1} is zero; cannot build a Jacobi preconditioner")
    return SparseMatrix(sp.diags(1.0 / d, format="csr"))


def build_preconditioner(a: SparseMatrix, scheme: SchemeId, loops: int,
                         threshold: Optional[float] = None) -> SparseMatrix:
    """Run `loops` scheme steps from the diagonal seed, chopping after each loop.

    The iteration runs on dense intermediates; entries of modulus at or
    below threshold are dropped at the end of every loop.
    """
    if loops < 1:
        raise ValueError(f"preconditioner needs at least one loop, got {loops}")
    threshold = get_krylov_config().chop_threshold if threshold is None else threshold
    if a.rows != a.cols:
        raise ShapeError(f"preconditioner needs a square matrix, got {a.rows}x{a.cols}")

    dense_a = densify(a)
    x = init_diagonal(dense_a)
    current = sparsify(x, threshold)
    counter = MatmulCounter()
    for loop in range(1, loops + 1):
        try:
            x = scheme_step(scheme, dense_a, x, counter=counter)
        except DivergenceError as e:
            logger.error(f"{scheme.label} preconditioner diverged in loop {loop}: {e}")
            raise DivergenceError(str(e), partial=current) from e
        current = sparsify(x, threshold)
        x = densify(current)
        logger.debug(f"{scheme.label} preconditioner loop {loop}: nnz {current.nnz}")
    logger.info(f"built {scheme.label} X_{loops} preconditioner: nnz {current.nnz} "
                f"({current.nnz / (a.rows * a.cols):.1%} fill), {counter.count} products")
    return current
