"""
Initialization strategies
Initial approximations X0 = alpha G and matrix index detection
"""

from src.initialization.index import IndexResult, matrix_index
from src.initialization.strategies import (
    InitKind,
    InitResult,
    InitStrategy,
    PanSchreiberConvention,
    init_diagonal,
    init_drazin,
    init_explicit,
    init_pan_schreiber,
    init_scaled_adjoint,
    initialize,
    parse_init_strategy,
)

__all__ = [
    "IndexResult",
    "InitKind",
    "InitResult",
    "InitStrategy",
    "PanSchreiberConvention",
    "init_diagonal",
    "init_drazin",
    "init_explicit",
    "init_pan_schreiber",
    "init_scaled_adjoint",
    "initialize",
    "matrix_index",
    "parse_init_strategy",
]
