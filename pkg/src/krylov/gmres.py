"""
Restarted GMRES for Hyperpower Inverse Toolkit
Modified Gram-Schmidt Arnoldi, complex Givens rotations, left preconditioning
"""

from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.linalg import solve_triangular

from src.krylov.sparse import SparseMatrix, spmv
from src.utils.config_simple import get_krylov_config
from src.utils.errors import ConfigurationError, ShapeError
from src.utils.logging_setup import get_logger

logger = get_logger(__name__)


def _krylov_default(name: str):
    return field(default_factory=lambda: getattr(get_krylov_config(), name))


@dataclass
class GmresConfig:
    """Solver settings; convergence means ||b - A x|| / ||b|| <= tol."""
    tol: float = 1e-8
    restart: int = _krylov_default("restart")
    max_iters: int = _krylov_default("max_iters")
    preconditioner: Optional[SparseMatrix] = None
    stagnation_tolerance: float = _krylov_default("stagnation_tolerance")

    def __post_init__(self):
        if self.tol <= 0:
            raise ConfigurationError(f"GMRES tolerance must be positive, got {self.tol}")
        if self.restart < 1 or self.max_iters < 1:
            raise ConfigurationError(f"restart and max_iters must be positive, got {self.restart}, {self.max_iters}")


@dataclass
class GmresReport:
    """iterations counts Arnoldi steps over all restart cycles.

    residual_history holds the preconditioned relative residual after each
    step; true_residuals the true relative residual at the start of each
    cycle and at the end, keyed by iteration.
    """
    iterations: int
    converged: bool
    x: np.ndarray
    residual_history: List[float] = field(default_factory=list)
    true_residuals: List[Tuple[int, float]] = field(default_factory=list)
    cycle_starts: List[int] = field(default_factory=list)
    stagnated: bool = False

    @property
    def final_residual(self) -> float:
        return self.true_residuals[-1][1] if self.true_residuals else float("nan")

    def to_frame(self) -> pd.DataFrame:
        """One row per iteration; true residuals only where they were measured."""
        true_map = dict(self.true_residuals)
        rows = [{"iteration": 0, "preconditioned_residual": np.nan, "true_residual": true_map.get(0, np.nan)}]
        for k, value in enumerate(self.residual_history, start=1):
            rows.append({"iteration": k, "preconditioned_residual": value,
                         "true_residual": true_map.get(k, np.nan)})
        return pd.DataFrame(rows, columns=["iteration", "preconditioned_residual", "true_residual"])


def _givens(a: complex, b: float) -> Tuple[float, complex]:
    """c real, s complex with [c s; -conj(s) c] [a; b] = [r; 0]."""
    if b == 0:
        return 1.0, 0.0
    if a == 0:
        return 0.0, 1.0
    magnitude = abs(a)
    rho = np.hypot(magnitude, abs(b))
    return magnitude / rho, (a / magnitude) * np.conj(b) / rho


def gmres(a: SparseMatrix, b: Any, cfg: Optional[GmresConfig] = None) -> GmresReport:
    """Solve A x = b by restarted GMRES(m) from a zero initial guess.

    With a preconditioner M the Krylov space is built for M A and the inner
    least-squares problem minimizes ||M (b - A x)||. Convergence is only
    declared on the true residual; when the preconditioned residual meets
    the tolerance but the true one does not, the next cycle aims lower by
    the observed ratio.
    """
    cfg = cfg or GmresConfig()
    if a.rows != a.cols:
        raise ShapeError(f"GMRES needs a square matrix, got {a.rows}x{a.cols}")
    b = np.asarray(b)
    if b.ndim != 1 or b.shape[0] != a.rows:
        raise ShapeError(f"right-hand side of length {b.shape[0] if b.ndim else 0} does not match n={a.rows}")
    m_op = cfg.preconditioner
    if m_op is not None and m_op.shape != a.shape:
        raise ShapeError(f"preconditioner shape {m_op.shape} does not match {a.shape}")

    dtypes = [a.dtype, b.dtype] + ([m_op.dtype] if m_op is not None else [])
    dtype = np.result_type(np.float64, *dtypes)
    n = a.rows
    b = b.astype(dtype)

    def apply(v: np.ndarray) -> np.ndarray:
        w = spmv(a, v)
        return spmv(m_op, w) if m_op is not None else w

    x = np.zeros(n, dtype=dtype)
    report = GmresReport(iterations=0, converged=False, x=x)
    b_norm = np.linalg.norm(b)
    if b_norm == 0:
        report.converged = True
        report.true_residuals.append((0, 0.0))
        return report

    mb = spmv(m_op, b) if m_op is not None else b
    mb_norm = np.linalg.norm(mb)
    if mb_norm == 0:
        raise ConfigurationError("preconditioner maps the right-hand side to zero")
    target = cfg.tol
    previous_beta = None
    restart = min(cfg.restart, n)

    while True:
        true_rel = float(np.linalg.norm(b - spmv(a, x)) / b_norm)
        report.true_residuals.append((report.iterations, true_rel))
        if true_rel <= cfg.tol:
            report.converged = True
            break
        if report.iterations >= cfg.max_iters:
            break

        r = mb - apply(x)
        beta = np.linalg.norm(r)
        precond_rel = beta / mb_norm
        if precond_rel <= target:
            # the preconditioned residual hides the true one; aim lower
            target = min(target, precond_rel) * cfg.tol / true_rel
            logger.debug(f"tightening preconditioned target to {target:.3e} (true residual {true_rel:.3e})")
        if previous_beta is not None and previous_beta - beta < cfg.stagnation_tolerance * previous_beta:
            report.stagnated = True
            logger.warning(f"GMRES stagnated at relative residual {true_rel:.3e} "
                           f"after {report.iterations} iterations")
            break
        previous_beta = beta
        report.cycle_starts.append(report.iterations)

        v = np.zeros((n, restart + 1), dtype=dtype)
        h = np.zeros((restart + 1, restart), dtype=dtype)
        cs = np.zeros(restart, dtype=np.float64)
        sn = np.zeros(restart, dtype=dtype)
        g = np.zeros(restart + 1, dtype=dtype)
        g[0] = beta
        v[:, 0] = r / beta

        steps = 0
        for j in range(restart):
            w = apply(v[:, j])
            report.iterations += 1
            steps = j + 1
            w_norm_before = np.linalg.norm(w)
            for i in range(j + 1):
                h[i, j] = np.vdot(v[:, i], w)
                w = w - h[i, j] * v[:, i]
            h[j + 1, j] = np.linalg.norm(w)
            breakdown = abs(h[j + 1, j]) <= np.finfo(np.float64).eps * max(w_norm_before, 1.0)
            if not breakdown:
                v[:, j + 1] = w / h[j + 1, j]

            for i in range(j):
                upper = cs[i] * h[i, j] + sn[i] * h[i + 1, j]
                h[i + 1, j] = -np.conj(sn[i]) * h[i, j] + cs[i] * h[i + 1, j]
                h[i, j] = upper
            cs[j], sn[j] = _givens(h[j, j], h[j + 1, j].real)
            h[j, j] = cs[j] * h[j, j] + sn[j] * h[j + 1, j]
            h[j + 1, j] = 0
            g[j + 1] = -np.conj(sn[j]) * g[j]
            g[j] = cs[j] * g[j]

            report.residual_history.append(float(abs(g[j + 1]) / mb_norm))
            if breakdown:
                logger.debug(f"Arnoldi breakdown at step {report.iterations}: invariant subspace found")
                break
            if abs(g[j + 1]) / mb_norm <= target or report.iterations >= cfg.max_iters:
                break

        y = solve_triangular(h[:steps, :steps], g[:steps], lower=False)
        x = x + v[:, :steps] @ y
        report.x = x

    report.x = x
    logger.info(f"GMRES {'converged' if report.converged else 'stopped'} after {report.iterations} iterations, "
                f"relative residual {report.final_residual:.3e}")
    return report
