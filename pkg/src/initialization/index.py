"""
Matrix Index Detection for Hyperpower Inverse Toolkit
Smallest l with rank(A^(l+1)) = rank(A^l)
"""

from dataclasses import dataclass, field
from typing import Any, List, Optional

from src.linalg.dense import DenseMatrix, matmul
from src.linalg.norms import singular_values
from src.utils.errors import InternalInconsistencyError, ShapeError
from src.utils.logging_setup import get_logger

logger = get_logger(__name__)


@dataclass
class IndexResult:
    """Index l and the ranks of A^0, A^1, ..., A^(l+1)."""
    index: int
    rank_sequence: List[int] = field(default_factory=list)


def default_index_tolerance(a: DenseMatrix):
    """n * sqrt(unit roundoff): powers amplify rounding in the nilpotent part."""
    config = a.config
    return config.real(a.rows) * config.sqrt(config.eps)


def relative_rank(a: DenseMatrix, tol: Any, floor: Any = 0) -> int:
    """Singular values above both tol * sigma_1 and the absolute floor."""
    values = singular_values(a)
    if not values or values[0] == 0:
        return 0
    cutoff = max(a.config.real(tol) * values[0], a.config.real(floor))
    return sum(1 for s in values if s > cutoff)


def _rounding_floor(a: DenseMatrix, largest: Any, k: int):
    """Size of the rounding error carried by A^k built from k - 1 products."""
    config = a.config
    try:
        return config.real(k * a.rows) * config.eps * largest ** k
    except OverflowError:
        return config.zero()


def matrix_index(a: DenseMatrix, tol: Optional[Any] = None) -> IndexResult:
    """Index of a square matrix.

    Ranks of successive powers are taken relative to each power's largest
    singular value, ignoring anything below the rounding error of the
    power itself, since a nilpotent part leaves only noise; rank(A^0) = n.
    The search stops at l = n, beyond which exact arithmetic cannot go, so
    overrunning it raises.
    """
    if not a.is_square:
        raise ShapeError(f"index needs a square matrix, got {a.rows}x{a.cols}")
    tol = default_index_tolerance(a) if tol is None else tol
    n = a.rows
    values = singular_values(a)
    largest = values[0] if values else a.config.zero()
    ranks = [n]
    power = a
    for l in range(n + 1):
        power = a if l == 0 else matmul(power, a)
        ranks.append(relative_rank(power, tol, _rounding_floor(a, largest, l + 1)))
        if ranks[-1] > ranks[-2]:
            logger.warning(f"rank rose from {ranks[-2]} to {ranks[-1]} at power {l + 1}; tolerance may be too tight")
        if ranks[-1] == ranks[-2]:
            logger.debug(f"index {l}, rank sequence {ranks}")
            return IndexResult(index=l, rank_sequence=ranks)
    raise InternalInconsistencyError(
        f"rank sequence {ranks} did not stabilize within {n} powers; rank tolerance {float(tol):.1e} is unsuitable")
