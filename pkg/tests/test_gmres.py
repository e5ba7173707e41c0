"""
Tests for restarted GMRES
"""

import numpy as np
import pytest
import scipy.sparse as sp

from src.krylov.gmres import GmresConfig, _givens, gmres
from src.krylov.preconditioner import jacobi_preconditioner
from src.krylov.problems import ones_rhs, shifted_laplacian
from src.krylov.sparse import SparseMatrix
from src.utils.errors import ConfigurationError, ShapeError


def tridiagonal(n):
    return SparseMatrix(sp.diags([-np.ones(n - 1), 4 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1]))


def test_givens_annihilates():
    for a, b in [(3.0, 4.0), (1 + 2j, 0.5), (0.0, 2.0), (2.0, 0.0)]:
        c, s = _givens(a, b)
        assert abs(-np.conj(s) * a + c * b) < 1e-14
        assert np.isreal(c)
        assert abs(c * c + abs(s) ** 2 - 1) < 1e-14


def test_solves_real_system():
    a = tridiagonal(40)
    b = np.arange(1.0, 41.0)
    report = gmres(a, b, GmresConfig(tol=1e-10))
    assert report.converged
    assert np.linalg.norm(b - a.csr @ report.x) / np.linalg.norm(b) <= 1e-10
    assert report.final_residual <= 1e-10


def test_restarts_are_recorded():
    a = tridiagonal(60)
    report = gmres(a, np.ones(60), GmresConfig(tol=1e-10, restart=5))
    assert report.converged
    assert len(report.cycle_starts) > 1
    assert report.cycle_starts[:2] == [0, 5]


def test_complex_system_with_preconditioner():
    a = shifted_laplacian(8)
    b = ones_rhs(a.rows)
    plain = gmres(a, b, GmresConfig(tol=1e-8))
    preconditioned = gmres(a, b, GmresConfig(tol=1e-8, preconditioner=jacobi_preconditioner(a)))
    assert plain.converged and preconditioned.converged
    assert np.iscomplexobj(plain.x)
    assert np.linalg.norm(b - a.csr @ preconditioned.x) / np.linalg.norm(b) <= 1e-8


def test_zero_rhs():
    report = gmres(tridiagonal(5), np.zeros(5))
    assert report.converged and report.iterations == 0
    assert np.all(report.x == 0)


def test_iteration_budget():
    report = gmres(tridiagonal(50), np.ones(50), GmresConfig(tol=1e-12, restart=3, max_iters=4))
    assert not report.converged
    assert report.iterations <= 6


def test_frame_columns():
    report = gmres(tridiagonal(10), np.ones(10), GmresConfig(tol=1e-8))
    frame = report.to_frame()
    assert list(frame.columns) == ["iteration", "preconditioned_residual", "true_residual"]
    assert len(frame) == report.iterations + 1
    assert frame["true_residual"].iloc[-1] == pytest.approx(report.final_residual)


def test_input_checks():
    a = tridiagonal(4)
    with pytest.raises(ShapeError):
        gmres(SparseMatrix(np.ones((2, 3))), np.ones(2))
    with pytest.raises(ShapeError):
        gmres(a, np.ones(3))
    with pytest.raises(ConfigurationError):
        GmresConfig(tol=0.0)


def test_residual_never_rises_within_a_cycle():
    report = gmres(tridiagonal(60), np.ones(60), GmresConfig(tol=1e-10, restart=5))
    bounds = report.cycle_starts + [len(report.residual_history)]
    for start, stop in zip(bounds, bounds[1:]):
        cycle = report.residual_history[start:stop]
        assert all(later <= earlier * (1 + 1e-10) for earlier, later in zip(cycle, cycle[1:]))


def test_identity_converges_in_one_step():
    b = np.arange(1.0, 6.0)
    report = gmres(SparseMatrix(sp.identity(5)), b, GmresConfig(tol=1e-12))
    assert report.converged
    assert report.iterations == 1
    assert np.allclose(report.x, b)


def test_diagonal_system_solved_within_its_dimension():
    a = SparseMatrix(sp.diags([1.0, 2.0, 3.0, 4.0, 5.0]))
    report = gmres(a, np.ones(5), GmresConfig(tol=1e-12))
    assert report.converged
    assert report.iterations <= 5
    assert np.allclose(report.x, 1 / np.arange(1.0, 6.0), rtol=0, atol=1e-10)
