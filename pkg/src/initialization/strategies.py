"""
Initialization Strategies for Hyperpower Inverse Toolkit
Recipes producing X0 = alpha * G and the alpha the reliable stop rule needs
"""

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, List, Optional, Tuple

import numpy as np

from src.initialization.index import IndexResult, matrix_index
from src.linalg.dense import DenseMatrix, conj_transpose, diag, diagonal, mat_pow, matmul, to_config, trace
from src.linalg.matrix_market import read_dense
from src.linalg.norms import NormKind, norm, singular_values
from src.linalg.scalar import extended, to_float
from src.utils.config_simple import get_precision_config
from src.utils.errors import ConfigurationError, DegenerateInputError, ShapeError
from src.utils.logging_setup import get_logger

logger = get_logger(__name__)

_TRACE_FALLBACK_RATIO = 1e-12


class InitKind(str, Enum):
    ADJOINT = "adjoint"
    PAN_SCHREIBER = "pan-schreiber"
    DRAZIN = "drazin"
    DIAGONAL = "diagonal"
    EXPLICIT = "explicit"


class PanSchreiberConvention(str, Enum):
    """How the nonzero eigenvalues lambda of GA enter alpha.

    SINGULAR: alpha = 2/(lambda_1 + lambda_r); for G = A* the lambdas are
    the squared singular values, which makes AX0 equioscillate around I.
    EIGENVALUE_SQUARED: alpha = 2/(lambda_1^2 + lambda_r^2).
    """
    SINGULAR = "singular"
    EIGENVALUE_SQUARED = "eigenvalue-squared"


@dataclass(frozen=True)
class InitStrategy:
    """Named recipe; g/alpha/source only matter for some kinds."""
    kind: InitKind
    g: Optional[DenseMatrix] = None
    alpha: Optional[float] = None
    source: Optional[str] = None
    convention: PanSchreiberConvention = PanSchreiberConvention.SINGULAR

    @property
    def name(self) -> str:
        if self.kind is InitKind.PAN_SCHREIBER and self.convention is PanSchreiberConvention.EIGENVALUE_SQUARED:
            return "pan-schreiber-literal"
        if self.kind is InitKind.EXPLICIT and self.source:
            return f"explicit:{self.source}:{self.alpha}"
        return self.kind.value


@dataclass
class InitResult:
    """X0 = alpha * G, plus the index when the Drazin recipe ran."""
    x0: DenseMatrix
    alpha: Any
    g: DenseMatrix
    index: Optional[int] = None


def init_scaled_adjoint(a: DenseMatrix) -> Tuple[DenseMatrix, Any]:
    """X0 = A* / (||A||_1 ||A||_inf)."""
    scale = norm(a, NormKind.ONE) * norm(a, NormKind.INFINITY)
    if scale == 0:
        raise DegenerateInputError("scaled adjoint initialization of a zero matrix")
    alpha = a.config.real(1) / scale
    return conj_transpose(a) * alpha, alpha


def _nonzero_spectrum(a: DenseMatrix, g: Optional[DenseMatrix]) -> List[Any]:
    """Descending moduli of the nonzero eigenvalues of GA."""
    config = a.config
    if g is None:
        values = [s * s for s in singular_values(a)]
    else:
        ga = matmul(g, a)
        if config.is_extended:
            ctx = config.context
            eigen = ctx.eig(ctx.matrix(ga.data.tolist()), left=False, right=False)
            values = sorted((config.real(abs(value)) for value in eigen), reverse=True)
        else:
            values = sorted((float(abs(value)) for value in np.linalg.eigvals(ga.data)), reverse=True)
    if not values or values[0] == 0:
        return []
    cutoff = config.real(max(a.rows, a.cols)) * config.eps * values[0]
    return [value for value in values if value > cutoff]


def init_pan_schreiber(a: DenseMatrix, g: Optional[DenseMatrix] = None,
                       convention: PanSchreiberConvention = PanSchreiberConvention.SINGULAR
                       ) -> Tuple[DenseMatrix, Any]:
    """X0 = alpha G with alpha from the extreme nonzero eigenvalues of GA; G defaults to A*."""
    convention = PanSchreiberConvention(convention)
    if g is not None and (g.rows != a.cols or g.cols != a.rows):
        raise ShapeError(f"G must be {a.cols}x{a.rows}, got {g.rows}x{g.cols}")
    spectrum = _nonzero_spectrum(a, g)
    if not spectrum:
        raise DegenerateInputError("GA has no nonzero eigenvalue; Pan-Schreiber scaling is undefined")
    largest, smallest = spectrum[0], spectrum[-1]
    if convention is PanSchreiberConvention.SINGULAR:
        alpha = 2 / (largest + smallest)
    else:
        alpha = 2 / (largest * largest + smallest * smallest)
    alpha = a.config.real(alpha)
    logger.debug(f"Pan-Schreiber ({convention.value}): lambda_1={to_float(largest):.4e}, "
                 f"lambda_r={to_float(smallest):.4e}, rank {len(spectrum)}, alpha={to_float(alpha):.4e}")
    base = conj_transpose(a) if g is None else g
    return base * alpha, alpha


def _drazin_trace(a: DenseMatrix, l: int):
    """tr(A^(l+1)), recomputed at extended precision when cancellation wipes it out at double."""
    power = mat_pow(a, l + 1)
    value = trace(power)
    if a.config.is_extended:
        return value
    scale = to_float(norm(power, NormKind.FROBENIUS))
    if abs(value) >= _TRACE_FALLBACK_RATIO * scale:
        return value
    digits = get_precision_config().oracle_digits
    logger.warning(f"tr(A^{l + 1}) = {value:.3e} is below {_TRACE_FALLBACK_RATIO:g} * ||A^{l + 1}||_F; "
                   f"recomputing at {digits} digits")
    precise = trace(mat_pow(to_config(a, extended(digits, a.config.kind)), l + 1))
    return a.config.scalar(precise)


def init_drazin(a: DenseMatrix, tol: Optional[Any] = None) -> Tuple[DenseMatrix, Any, int]:
    """X0 = A^l / tr(A^(l+1)) with l the index of A."""
    if not a.is_square:
        raise ShapeError(f"Drazin initialization needs a square matrix, got {a.rows}x{a.cols}")
    result: IndexResult = matrix_index(a, tol)
    l = result.index
    denominator = _drazin_trace(a, l)
    if denominator == 0 or abs(denominator) <= a.config.eps * to_float(norm(mat_pow(a, l + 1), NormKind.FROBENIUS)):
        raise DegenerateInputError(
            f"tr(A^{l + 1}) vanishes at working precision; supply a custom G with the explicit strategy")
    alpha = a.config.one() / denominator
    logger.debug(f"Drazin initialization: index {l}, ranks {result.rank_sequence}, alpha={to_float(alpha):.4e}")
    return mat_pow(a, l) * alpha, alpha, l


def init_diagonal(a: DenseMatrix) -> DenseMatrix:
    """X0 = diag(1/a_11, ..., 1/a_nn)."""
    if not a.is_square:
        raise ShapeError(f"diagonal initialization needs a square matrix, got {a.rows}x{a.cols}")
    entries = diagonal(a)
    for i, value in enumerate(entries, start=1):
        if value == 0:
            raise DegenerateInputError(f"diagonal entry {i} is zero; cannot invert the diagonal")
    one = a.config.one()
    return diag([one / value for value in entries], a.config)


def init_explicit(a: DenseMatrix, g: DenseMatrix, alpha: Any) -> DenseMatrix:
    """X0 = alpha G for a caller-supplied G."""
    if g.rows != a.cols or g.cols != a.rows:
        raise ShapeError(f"G must be {a.cols}x{a.rows}, got {g.rows}x{g.cols}")
    if not alpha > 0:
        raise ConfigurationError(f"alpha must be positive, got {alpha}")
    return to_config(g, a.config) * alpha


def parse_init_strategy(text: str) -> InitStrategy:
    """'adjoint' | 'pan-schreiber' | 'pan-schreiber-literal' | 'drazin' | 'diagonal' | 'explicit:<file>:<alpha>'."""
    key = text.strip()
    lowered = key.lower()
    if lowered == "pan-schreiber-literal":
        return InitStrategy(InitKind.PAN_SCHREIBER, convention=PanSchreiberConvention.EIGENVALUE_SQUARED)
    if lowered.startswith("explicit:"):
        remainder = key[len("explicit:"):]
        path, sep, alpha_text = remainder.rpartition(":")
        if not sep or not path:
            raise ConfigurationError(f"explicit strategy needs 'explicit:<file>:<alpha>', got {text!r}")
        try:
            alpha = float(alpha_text)
        except ValueError:
            raise ConfigurationError(f"explicit strategy alpha {alpha_text!r} is not a number")
        if not alpha > 0:
            raise ConfigurationError(f"alpha must be positive, got {alpha}")
        return InitStrategy(InitKind.EXPLICIT, alpha=alpha, source=path)
    try:
        kind = InitKind(lowered)
    except ValueError:
        raise ConfigurationError(
            f"unknown init strategy {text!r}; expected adjoint, pan-schreiber, pan-schreiber-literal, "
            f"drazin, diagonal or explicit:<file>:<alpha>")
    if kind is InitKind.EXPLICIT:
        raise ConfigurationError("explicit strategy needs 'explicit:<file>:<alpha>'")
    return InitStrategy(kind)


def initialize(a: DenseMatrix, strategy: InitStrategy) -> InitResult:
    """Run a strategy and package X0, alpha and G."""
    kind = strategy.kind
    if kind is InitKind.ADJOINT:
        x0, alpha = init_scaled_adjoint(a)
        return InitResult(x0=x0, alpha=alpha, g=conj_transpose(a))
    if kind is InitKind.PAN_SCHREIBER:
        g = None if strategy.g is None else to_config(strategy.g, a.config)
        x0, alpha = init_pan_schreiber(a, g, strategy.convention)
        return InitResult(x0=x0, alpha=alpha, g=conj_transpose(a) if g is None else g)
    if kind is InitKind.DRAZIN:
        x0, alpha, l = init_drazin(a)
        return InitResult(x0=x0, alpha=alpha, g=mat_pow(a, l), index=l)
    if kind is InitKind.DIAGONAL:
        x0 = init_diagonal(a)
        return InitResult(x0=x0, alpha=a.config.real(1), g=x0)

    g = strategy.g
    if g is None:
        if not strategy.source:
            raise ConfigurationError("explicit strategy needs G or a MatrixMarket source")
        if not Path(strategy.source).exists():
            raise ConfigurationError(f"explicit G file {strategy.source} does not exist")
        g = read_dense(strategy.source, a.config)
    g = to_config(g, a.config)
    alpha = a.config.real(strategy.alpha)
    return InitResult(x0=init_explicit(a, g, alpha), alpha=alpha, g=g)
