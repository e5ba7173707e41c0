"""
Error Types for Hyperpower Inverse Toolkit
One hierarchy, machine-readable through to_dict()
"""

from typing import Any, Dict, Optional


class HyperInverseError(Exception):
    """Base class for every error raised by the toolkit."""

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used by the command line."""
        return {"error": type(self).__name__, "message": str(self)}


class ShapeError(HyperInverseError):
    """Operands are not conformable, or a square matrix was required."""


class ConfigurationError(HyperInverseError):
    """Mixed scalar configurations or an unrecognised option string."""


class DegenerateInputError(HyperInverseError):
    """Input admits no meaningful initial approximation."""


class InternalInconsistencyError(HyperInverseError):
    """A search that cannot fail in exact arithmetic failed numerically."""


class MatrixMarketError(HyperInverseError):
    """Unreadable or malformed MatrixMarket file."""


class ConvergenceDiagnosticError(HyperInverseError):
    """A diagnostic could not be computed; carries whatever was obtained."""

    def __init__(self, message: str, last_iterate: Optional[Any] = None):
        super().__init__(message)
        self.last_iterate = last_iterate


class DivergenceError(HyperInverseError):
    """Iterates became non-finite; carries the partial result."""

    def __init__(self, message: str, report: Optional[Any] = None,
                 partial: Optional[Any] = None):
        super().__init__(message)
        self.report = report
        self.partial = partial

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        if self.report is not None:
            payload["report"] = self.report.to_dict()
        return payload
