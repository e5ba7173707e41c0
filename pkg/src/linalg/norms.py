"""
Norms and Spectral Utilities for Hyperpower Inverse Toolkit
Norm, rank and singular-value helpers every driver consumes
"""

from enum import Enum
from typing import Any, List, Optional

import numpy as np

from src.linalg.dense import DenseMatrix, conj_transpose
from src.utils.config_simple import get_precision_config
from src.utils.errors import ConvergenceDiagnosticError, DegenerateInputError, ShapeError
from src.utils.logging_setup import get_logger

logger = get_logger(__name__)

_POWER_SEED = 20150817


class NormKind(str, Enum):
    """Matrix norms understood by the toolkit."""
    ONE = "one"
    INFINITY = "infinity"
    FROBENIUS = "frobenius"
    SPECTRAL = "spectral-estimate"

    @classmethod
    def parse(cls, text: str) -> "NormKind":
        aliases = {"1": cls.ONE, "inf": cls.INFINITY, "fro": cls.FROBENIUS,
                   "2": cls.SPECTRAL, "spectral": cls.SPECTRAL}
        key = text.strip().lower()
        if key in aliases:
            return aliases[key]
        return cls(key)


def norm(a: DenseMatrix, kind: NormKind = NormKind.FROBENIUS):
    """Matrix norm as a real scalar of the working precision."""
    kind = NormKind(kind)
    config = a.config
    if kind is NormKind.SPECTRAL:
        return spectral_estimate(a)
    magnitudes = np.abs(a.data)
    if kind is NormKind.ONE:
        return config.real(max(_ordered_sum(magnitudes[:, j], config) for j in range(a.cols)))
    if kind is NormKind.INFINITY:
        return config.real(max(_ordered_sum(magnitudes[i, :], config) for i in range(a.rows)))
    if config.is_extended:
        total = config.real(0)
        for value in magnitudes.ravel():
            total += value * value
        return config.sqrt(total)
    return float(np.sqrt(np.sum(magnitudes * magnitudes)))


def _ordered_sum(values: np.ndarray, config):
    """Left-to-right sum, so results do not depend on pairwise blocking."""
    total = config.real(0)
    for value in values:
        total = total + value
    return total


def _vector_norm(v: np.ndarray, config):
    if config.is_extended:
        total = config.real(0)
        for value in v:
            magnitude = abs(value)
            total += magnitude * magnitude
        return config.sqrt(total)
    return float(np.linalg.norm(v))


def spectral_estimate(a: DenseMatrix, tolerance: Optional[float] = None,
                      max_sweeps: Optional[int] = None):
    """Square root of the dominant eigenvalue of A*A by power iteration.

    The Rayleigh quotient ||A v||^2 of a unit vector never exceeds the
    dominant eigenvalue, so the estimate approaches the 2-norm from below.
    Iteration stops when the quotient changes by less than the relative
    tolerance; a zero matrix gives zero.
    """
    settings = get_precision_config()
    tolerance = settings.power_tolerance if tolerance is None else tolerance
    max_sweeps = settings.power_max_sweeps if max_sweeps is None else max_sweeps
    config = a.config

    rng = np.random.default_rng(_POWER_SEED)
    start = rng.uniform(0.5, 1.5, size=a.cols)
    v = np.array([config.scalar(value) for value in start], dtype=object) if config.is_extended \
        else start.astype(config.dtype)
    v = v / _vector_norm(v, config)
    adjoint = conj_transpose(a).data
    tolerance = config.real(tolerance)

    previous = None
    estimate = config.real(0)
    for sweep in range(max_sweeps):
        w = a.data @ v
        estimate = config.real(_vector_norm(w, config) ** 2)
        z = adjoint @ w
        z_norm = _vector_norm(z, config)
        if z_norm == 0:
            if estimate == 0 and sweep == 0 and not _is_zero(a):
                # start vector in the null space; restart from a unit vector
                v = np.roll(v, 1)
                continue
            return config.sqrt(estimate)
        if previous is not None and abs(estimate - previous) <= tolerance * estimate:
            logger.debug(f"spectral estimate converged after {sweep + 1} sweeps")
            return config.sqrt(estimate)
        previous = estimate
        v = z / z_norm
    raise ConvergenceDiagnosticError(
        f"power iteration did not reach relative tolerance {float(tolerance):.1e} in {max_sweeps} sweeps",
        last_iterate=config.sqrt(estimate),
    )


def _is_zero(a: DenseMatrix) -> bool:
    return all(value == 0 for value in a.data.ravel())


def singular_values(a: DenseMatrix) -> List[Any]:
    """Singular values in descending order at the working precision."""
    config = a.config
    if config.is_extended:
        ctx = config.context
        values = ctx.svd(ctx.matrix(a.data.tolist()), compute_uv=False)
        return sorted((config.real(values[i]) for i in range(values.rows)), reverse=True)
    return [float(s) for s in np.linalg.svd(a.data, compute_uv=False)]


def default_rank_tolerance(a: DenseMatrix, largest: Optional[Any] = None):
    """max(rows, cols) x unit roundoff x spectral norm."""
    if largest is None:
        largest = spectral_estimate(a)
    return a.config.real(max(a.rows, a.cols)) * a.config.eps * largest


def rank(a: DenseMatrix, tol: Optional[Any] = None) -> int:
    """Number of singular values exceeding tol."""
    values = singular_values(a)
    if tol is None:
        tol = default_rank_tolerance(a, values[0] if values else 0)
    if tol < 0:
        raise ValueError(f"rank tolerance must be nonnegative, got {tol}")
    tol = a.config.real(tol)
    return sum(1 for s in values if s > tol)


def condition_number(a: DenseMatrix, tol: Optional[Any] = None):
    """sigma_1 / sigma_r over the singular values above the rank tolerance."""
    values = singular_values(a)
    if tol is None:
        tol = default_rank_tolerance(a, values[0])
    kept = [s for s in values if s > a.config.real(tol)]
    if not kept:
        raise DegenerateInputError("condition number of a numerically zero matrix")
    return kept[0] / kept[-1]


def pseudo_inverse(a: DenseMatrix, tol: Optional[Any] = None) -> DenseMatrix:
    """Moore-Penrose inverse through the singular value decomposition."""
    config = a.config
    if config.is_extended:
        ctx = config.context
        u, s, vh = ctx.svd(ctx.matrix(a.data.tolist()), full_matrices=False, compute_uv=True)
        values = [config.real(s[i]) for i in range(s.rows)]
        cutoff = default_rank_tolerance(a, max(values)) if tol is None else config.real(tol)
        result = np.full((a.cols, a.rows), config.zero(), dtype=object)
        for k, sigma in enumerate(values):
            if sigma <= cutoff:
                continue
            inverse_sigma = 1 / sigma
            for i in range(a.cols):
                left = ctx.conj(vh[k, i]) * inverse_sigma
                for j in range(a.rows):
                    result[i, j] += left * ctx.conj(u[j, k])
        return DenseMatrix(result, config)
    u, s, vh = np.linalg.svd(a.data, full_matrices=False)
    cutoff = default_rank_tolerance(a, s[0]) if tol is None else float(tol)
    inverse_s = np.array([1.0 / sigma if sigma > cutoff else 0.0 for sigma in s])
    result = (vh.conj().T * inverse_s) @ u.conj().T
    return DenseMatrix(result, config)


def inverse(a: DenseMatrix) -> DenseMatrix:
    """Ordinary inverse by Gaussian elimination with partial pivoting."""
    if not a.is_square:
        raise ShapeError(f"inverse needs a square matrix, got {a.rows}x{a.cols}")
    config = a.config
    if config.is_extended:
        ctx = config.context
        inverted = ctx.inverse(ctx.matrix(a.data.tolist()))
        return DenseMatrix(inverted.tolist(), config)
    return DenseMatrix(np.linalg.inv(a.data), config)
