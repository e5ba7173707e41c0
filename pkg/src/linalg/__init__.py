"""
Linear algebra core
Precision-generic dense matrices, norms, generators and MatrixMarket exchange
"""

from src.linalg.dense import (
    DenseMatrix,
    MatmulCounter,
    conj_transpose,
    diag,
    diagonal,
    from_rows,
    identity,
    mat_pow,
    matmul,
    to_config,
    trace,
    zeros,
)
from src.linalg.generators import drazin_example_matrix, hilbert, random_with_condition
from src.linalg.norms import (
    NormKind,
    condition_number,
    inverse,
    norm,
    pseudo_inverse,
    rank,
    singular_values,
    spectral_estimate,
)
from src.linalg.scalar import COMPLEX_DOUBLE, DOUBLE, ScalarConfig, ScalarKind, extended, to_float

__all__ = [
    "COMPLEX_DOUBLE",
    "DOUBLE",
    "DenseMatrix",
    "MatmulCounter",
    "NormKind",
    "ScalarConfig",
    "ScalarKind",
    "condition_number",
    "conj_transpose",
    "diag",
    "diagonal",
    "drazin_example_matrix",
    "extended",
    "from_rows",
    "hilbert",
    "identity",
    "inverse",
    "mat_pow",
    "matmul",
    "norm",
    "pseudo_inverse",
    "random_with_condition",
    "rank",
    "singular_values",
    "spectral_estimate",
    "to_config",
    "to_float",
    "trace",
    "zeros",
]
