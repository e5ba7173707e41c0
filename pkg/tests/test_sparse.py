"""
Tests for CSR matrices and sparse exchange
"""

import numpy as np
import pytest
import scipy.sparse as sp

from src.krylov.sparse import SparseMatrix, densify, read_sparse, read_vector, sparsify, spmv, write_sparse
from src.linalg.dense import DenseMatrix, from_rows
from src.linalg.scalar import COMPLEX_DOUBLE
from src.utils.errors import ConfigurationError, ShapeError


def test_triplets_are_canonical():
    s = SparseMatrix.from_triplets(2, 3, [(1, 2, 1.0), (0, 1, 2.0), (1, 0, 3.0), (1, 2, 4.0)])
    assert s.nnz == 3
    assert list(s.offsets) == [0, 1, 3]
    assert list(s.indices) == [1, 0, 2]
    assert list(s.values) == [2.0, 3.0, 5.0]


def test_spmv_and_products():
    s = SparseMatrix(sp.diags([1.0, 2.0, 3.0]))
    assert np.array_equal(spmv(s, np.ones(3)), [1.0, 2.0, 3.0])
    assert (s @ s).diagonal().tolist() == [1.0, 4.0, 9.0]
    with pytest.raises(ShapeError):
        spmv(s, np.ones(2))
    with pytest.raises(ShapeError):
        s @ SparseMatrix.identity(2)


def test_sparsify_threshold():
    x = from_rows([[1.0, 1e-6], [-2e-5, 0.0]])
    chopped = sparsify(x, 1e-5)
    assert chopped.nnz == 2
    assert sparsify(x, 0.0).nnz == 3
    assert sparsify(x).nnz == 2
    with pytest.raises(ConfigurationError):
        sparsify(x, -1.0)


def test_densify_keeps_field():
    s = SparseMatrix(np.array([[1j, 0], [0, 2]]))
    assert s.is_complex
    d = densify(s)
    assert d.config == COMPLEX_DOUBLE
    assert d.entry(0, 0) == 1j


def test_sparsify_rounds_extended(precise):
    x = DenseMatrix([[precise.rational(1, 3), 0]], precise)
    s = sparsify(x, 0.0)
    assert s.values[0] == pytest.approx(1 / 3)


def test_exchange_round_trip(tmp_path):
    s = SparseMatrix.from_triplets(3, 3, [(0, 0, 4.0), (2, 1, -1.5)])
    back = read_sparse(write_sparse(tmp_path / "s.mtx", s))
    assert (back.csr != s.csr).nnz == 0

    complex_matrix = SparseMatrix(np.array([[1 + 1j, 0], [0, 2]]))
    back = read_sparse(write_sparse(tmp_path / "c.mtx", complex_matrix))
    assert back.is_complex and back.csr[0, 0] == 1 + 1j


def test_read_vector(tmp_path):
    path = tmp_path / "b.mtx"
    path.write_text("%%MatrixMarket matrix array real general\n3 1\n1\n2\n3\n", encoding="utf-8")
    assert np.array_equal(read_vector(path), [1.0, 2.0, 3.0])
    wide = tmp_path / "w.mtx"
    wide.write_text("%%MatrixMarket matrix array real general\n1 2\n1\n2\n", encoding="utf-8")
    with pytest.raises(ShapeError):
        read_vector(wide)
