"""
Scalar Configuration for Hyperpower Inverse Toolkit
Real or complex entries at machine-double or extended precision
"""

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Optional

import numpy as np
from mpmath.ctx_mp import MPContext

from src.utils.errors import ConfigurationError


class ScalarKind(str, Enum):
    """Field of the matrix entries."""
    REAL = "real"
    COMPLEX = "complex"


@lru_cache(maxsize=None)
def extended_context(digits: int) -> MPContext:
    """Private mpmath context at a fixed number of decimal digits.

    Numbers created by the context remember it, so arithmetic between them
    runs at that precision without touching mpmath's global state.
    """
    if digits <= 0:
        raise ConfigurationError(f"extended precision needs a positive digit count, got {digits}")
    ctx = MPContext()
    ctx.dps = digits
    return ctx


@dataclass(frozen=True)
class ScalarConfig:
    """Scalar configuration shared by every entry of a matrix.

    digits=None selects machine double (numpy float64 / complex128);
    a positive digit count selects mpmath numbers stored in object arrays.
    """
    kind: ScalarKind = ScalarKind.REAL
    digits: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.kind, ScalarKind):
            object.__setattr__(self, "kind", ScalarKind(self.kind))
        if self.digits is not None and self.digits <= 0:
            raise ConfigurationError(f"digits must be positive, got {self.digits}")

    # -- descriptors ---------------------------------------------------

    @property
    def is_extended(self) -> bool:
        return self.digits is not None

    @property
    def is_complex(self) -> bool:
        return self.kind is ScalarKind.COMPLEX

    @property
    def context(self) -> MPContext:
        if not self.is_extended:
            raise ConfigurationError("machine-double configuration has no mpmath context")
        return extended_context(self.digits)

    @property
    def dtype(self):
        if self.is_extended:
            return object
        return np.complex128 if self.is_complex else np.float64

    @property
    def eps(self):
        """Unit roundoff of the working precision, as a real scalar."""
        if self.is_extended:
            return +self.context.eps
        return float(np.finfo(np.float64).eps)

    def describe(self) -> str:
        precision = f"{self.digits} digits" if self.is_extended else "double"
        return f"{self.kind.value}/{precision}"

    def with_kind(self, kind: ScalarKind) -> "ScalarConfig":
        return replace(self, kind=ScalarKind(kind))

    def with_digits(self, digits: Optional[int]) -> "ScalarConfig":
        return replace(self, digits=digits)

    # -- conversions ---------------------------------------------------

    def scalar(self, value: Any):
        """Convert a number into an entry of this configuration."""
        if isinstance(value, Fraction):
            return self.rational(value.numerator, value.denominator)
        if self.is_extended:
            ctx = self.context
            if self.is_complex:
                if isinstance(value, (complex, np.complexfloating)):
                    value = complex(value)
                return ctx.mpc(value)
            if isinstance(value, (complex, np.complexfloating)) or type(value).__name__ == "mpc":
                if value.imag != 0:
                    raise ConfigurationError("complex value in a real configuration")
                value = value.real
            if isinstance(value, np.integer):
                value = int(value)
            return ctx.mpf(value)
        if self.is_complex:
            return complex(value)
        if isinstance(value, (complex, np.complexfloating)) or type(value).__name__ == "mpc":
            if value.imag != 0:
                raise ConfigurationError("complex value in a real configuration")
            value = value.real
        return float(value)

    def real(self, value: Any):
        """Real scalar at the working precision (norms, tolerances, alphas)."""
        if self.is_extended:
            ctx = self.context
            if isinstance(value, (complex, np.complexfloating)):
                value = complex(value).real
            elif type(value).__name__ == "mpc":
                value = value.real
            if isinstance(value, np.integer):
                value = int(value)
            return ctx.mpf(value)
        if isinstance(value, (complex, np.complexfloating)) or type(value).__name__ == "mpc":
            value = value.real
        return float(value)

    def rational(self, numerator: int, denominator: int = 1):
        """Exact-as-possible quotient of two integers."""
        if self.is_extended:
            ctx = self.context
            value = ctx.mpf(numerator) / ctx.mpf(denominator)
            return ctx.mpc(value) if self.is_complex else value
        value = numerator / denominator
        return complex(value) if self.is_complex else float(value)

    def sqrt(self, value: Any):
        """Real square root at the working precision."""
        if self.is_extended:
            return self.context.sqrt(self.real(value))
        return float(np.sqrt(float(value)))

    def log(self, value: Any):
        if self.is_extended:
            return self.context.ln(self.real(value))
        return float(np.log(float(value)))

    def zero(self):
        return self.scalar(0)

    def one(self):
        return self.scalar(1)

    def array(self, values: Any) -> np.ndarray:
        """Two-dimensional array of entries converted to this configuration."""
        if self.is_extended:
            source = np.asarray(values, dtype=object)
            out = np.empty(source.shape, dtype=object)
            for index, value in np.ndenumerate(source):
                out[index] = self.scalar(value)
            return out
        if not self.is_complex and np.iscomplexobj(np.asarray(values)):
            if np.any(np.imag(np.asarray(values)) != 0):
                raise ConfigurationError("complex entries in a real configuration")
            values = np.real(np.asarray(values))
        return np.array(values, dtype=self.dtype)

    def owns(self, value: Any) -> bool:
        """True when value already is an entry of this configuration."""
        if self.is_extended:
            ctx = self.context
            return type(value) is (ctx.mpc if self.is_complex else ctx.mpf)
        return isinstance(value, complex if self.is_complex else float)


def to_float(value: Any) -> float:
    """Plain float of a real scalar (reports, JSON, tables)."""
    if type(value).__name__ == "mpc" or isinstance(value, (complex, np.complexfloating)):
        value = abs(value)
    return float(value)


def is_finite_value(value: Any) -> bool:
    if type(value).__name__ in ("mpf", "mpc"):
        return bool(value.context.isfinite(value))
    return bool(np.isfinite(value))


DOUBLE = ScalarConfig(ScalarKind.REAL, None)
COMPLEX_DOUBLE = ScalarConfig(ScalarKind.COMPLEX, None)


def extended(digits: int, kind: ScalarKind = ScalarKind.REAL) -> ScalarConfig:
    """Extended-precision configuration with the given decimal digits."""
    return ScalarConfig(kind, digits)
