"""
Convergence Diagnostics for Hyperpower Inverse Toolkit
Order estimate, efficiency index, loop prediction and defining-equation residuals
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Sequence

from src.linalg.dense import DenseMatrix, conj_transpose, mat_pow, matmul
from src.linalg.norms import NormKind, norm
from src.linalg.scalar import to_float
from src.utils.errors import ConvergenceDiagnosticError, ShapeError


def _ln(value: Any) -> float:
    """Natural log that keeps extended-precision magnitudes out of float range."""
    context = getattr(value, "context", None)
    if context is not None:
        return float(context.ln(value))
    return math.log(value)


def coc_estimate(step_norms: Sequence[Any]) -> float:
    """Computational order of convergence from successive step norms.

    rho = ln(s[k+1]/s[k]) / ln(s[k]/s[k-1]) over the latest three
    consecutive norms that are positive and strictly decreasing.
    """
    values = list(step_norms)
    for end in range(len(values) - 1, 1, -1):
        s0, s1, s2 = values[end - 2], values[end - 1], values[end]
        if s2 > 0 and s0 > s1 > s2:
            denominator = _ln(s1) - _ln(s0)
            if denominator == 0:
                continue
            return (_ln(s2) - _ln(s1)) / denominator
    raise ConvergenceDiagnosticError(
        f"insufficient history: need three positive strictly decreasing step norms, got {len(values)} values")


def efficiency_index(p: int, c: int) -> float:
    """p^(1/c): order gained per dominant-cost operation."""
    if p < 2 or c < 1:
        raise ValueError(f"efficiency index needs p >= 2 and c >= 1, got p={p}, c={c}")
    return p ** (1.0 / c)


def predicted_loops(kappa: Any, p: int) -> float:
    """Loops to machine precision, about 2 log_p(kappa)."""
    if kappa < 1:
        raise ValueError(f"condition number must be at least 1, got {kappa}")
    if p < 2:
        raise ValueError(f"order must be at least 2, got {p}")
    return 2.0 * _ln(kappa) / math.log(p)


@dataclass
class PenroseResiduals:
    """Norms of XAX-X, AXA-A, (AX)*-AX and (XA)*-XA."""
    outer: float
    inner: float
    sym_ax: float
    sym_xa: float

    def worst(self) -> float:
        return max(self.outer, self.inner, self.sym_ax, self.sym_xa)

    def within(self, bound: float) -> bool:
        return self.worst() <= bound

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def outer_inverse_check(a: DenseMatrix, x: DenseMatrix, kind: NormKind = NormKind.FROBENIUS) -> PenroseResiduals:
    """The four Penrose residuals; only the first matters for a general outer inverse."""
    if x.rows != a.cols or x.cols != a.rows:
        raise ShapeError(f"X must be {a.cols}x{a.rows} for A of shape {a.rows}x{a.cols}, got {x.rows}x{x.cols}")
    ax = matmul(a, x)
    xa = matmul(x, a)
    return PenroseResiduals(
        outer=to_float(norm(matmul(x, ax) - x, kind)),
        inner=to_float(norm(matmul(ax, a) - a, kind)),
        sym_ax=to_float(norm(conj_transpose(ax) - ax, kind)),
        sym_xa=to_float(norm(conj_transpose(xa) - xa, kind)),
    )


@dataclass
class DrazinResiduals:
    """Norms of XAX-X, AX-XA and A^(l+1)X - A^l."""
    outer: float
    commute: float
    power: float

    def worst(self) -> float:
        return max(self.outer, self.commute, self.power)

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


def drazin_check(a: DenseMatrix, x: DenseMatrix, index: int,
                 kind: NormKind = NormKind.INFINITY) -> DrazinResiduals:
    """Residuals of the three Drazin defining equations for index l."""
    if not a.is_square or x.shape != a.shape:
        raise ShapeError(f"Drazin check needs square A and X of equal shape, got {a.shape} and {x.shape}")
    ax = matmul(a, x)
    xa = matmul(x, a)
    a_l = mat_pow(a, index)
    a_l1 = matmul(a_l, a)
    return DrazinResiduals(
        outer=to_float(norm(matmul(xa, x) - x, kind)),
        commute=to_float(norm(ax - xa, kind)),
        power=to_float(norm(matmul(a_l1, x) - a_l, kind)),
    )
