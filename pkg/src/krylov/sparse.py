"""
Sparse Matrices for Hyperpower Inverse Toolkit
Compressed sparse rows on scipy.sparse, with chop/densify and MatrixMarket exchange
"""

from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import scipy.sparse as sp

from src.linalg.dense import DenseMatrix
from src.linalg.matrix_market import payload_config, read_matrix_market, write_coordinate
from src.linalg.scalar import COMPLEX_DOUBLE, DOUBLE, ScalarConfig
from src.utils.config_simple import get_krylov_config
from src.utils.errors import ConfigurationError, ShapeError
from src.utils.logging_setup import get_logger

logger = get_logger(__name__)


class SparseMatrix:
    """CSR matrix at double precision.

    Column indices are sorted within each row and duplicates are summed on
    construction, so offsets, indices and values always describe a
    canonical CSR layout.
    """

    __slots__ = ("_csr",)

    def __init__(self, matrix: Any):
        csr = sp.csr_matrix(matrix)
        if csr.ndim != 2 or csr.shape[0] < 1 or csr.shape[1] < 1:
            raise ShapeError(f"sparse matrix dimensions must be positive, got {csr.shape}")
        if np.iscomplexobj(csr.data):
            csr = csr.astype(np.complex128)
        else:
            csr = csr.astype(np.float64)
        csr.sum_duplicates()
        csr.sort_indices()
        self._csr = csr

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets, complex_values: bool = False) -> "SparseMatrix":
        dtype = np.complex128 if complex_values else np.float64
        if not triplets:
            return cls(sp.csr_matrix((rows, cols), dtype=dtype))
        i, j, values = zip(*triplets)
        coo = sp.coo_matrix((np.array(values, dtype=dtype), (np.array(i), np.array(j))), shape=(rows, cols))
        return cls(coo)

    @classmethod
    def identity(cls, n: int, complex_values: bool = False) -> "SparseMatrix":
        return cls(sp.identity(n, dtype=np.complex128 if complex_values else np.float64, format="csr"))

    @property
    def csr(self) -> sp.csr_matrix:
        return self._csr

    @property
    def rows(self) -> int:
        return self._csr.shape[0]

    @property
    def cols(self) -> int:
        return self._csr.shape[1]

    @property
    def shape(self):
        return self._csr.shape

    @property
    def offsets(self) -> np.ndarray:
        return self._csr.indptr

    @property
    def indices(self) -> np.ndarray:
        return self._csr.indices

    @property
    def values(self) -> np.ndarray:
        return self._csr.data

    @property
    def nnz(self) -> int:
        return int(self._csr.nnz)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self._csr.data)

    @property
    def dtype(self):
        return self._csr.dtype

    def diagonal(self) -> np.ndarray:
        return self._csr.diagonal()

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return SparseMatrix(self._csr @ other._csr)

    def __repr__(self) -> str:
        kind = "complex" if self.is_complex else "real"
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz}, {kind})"


def spmv(a: SparseMatrix, v: Any) -> np.ndarray:
    """Sparse matrix times vector."""
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] != a.cols:
        raise ShapeError(f"vector of length {v.shape[0] if v.ndim else 0} does not match {a.rows}x{a.cols}")
    return a.csr @ v


def sparsify(x: DenseMatrix, threshold: Optional[float] = None) -> SparseMatrix:
    """Drop entries with modulus <= threshold; threshold 0 keeps every nonzero.

    Extended-precision input is rounded to double first.
    """
    threshold = get_krylov_config().chop_threshold if threshold is None else threshold
    if threshold < 0:
        raise ConfigurationError(f"chop threshold must be nonnegative, got {threshold}")
    array = x.to_numpy()
    keep = np.abs(array) > threshold
    kept = np.where(keep, array, 0)
    result = SparseMatrix(sp.csr_matrix(kept))
    logger.debug(f"sparsify {x.rows}x{x.cols} at {threshold:g}: kept {result.nnz} of {x.rows * x.cols}")
    return result


def densify(s: SparseMatrix) -> DenseMatrix:
    config = COMPLEX_DOUBLE if s.is_complex else DOUBLE
    return DenseMatrix(s.csr.toarray(), config)


def read_sparse(path: Union[str, Path]) -> SparseMatrix:
    """Read a MatrixMarket file (either layout) into CSR."""
    payload = read_matrix_market(path, DOUBLE)
    config: ScalarConfig = payload_config(payload, DOUBLE)
    return SparseMatrix.from_triplets(payload.rows, payload.cols, payload.entries,
                                      complex_values=config.is_complex)


def write_sparse(path: Union[str, Path], s: SparseMatrix, comment: str = "") -> Path:
    coo = s.csr.tocoo()
    entries = list(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))
    config = COMPLEX_DOUBLE if s.is_complex else DOUBLE
    return write_coordinate(path, s.rows, s.cols, entries, config, comment)


def read_vector(path: Union[str, Path]) -> np.ndarray:
    """One-column MatrixMarket file as a 1-D array."""
    payload = read_matrix_market(path, DOUBLE)
    if payload.cols != 1:
        raise ShapeError(f"{path}: a vector file needs one column, got {payload.cols}")
    vector = np.zeros(payload.rows, dtype=np.complex128 if payload.is_complex else np.float64)
    for i, _, value in payload.entries:
        vector[i] += value
    return vector
