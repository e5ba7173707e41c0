"""
Dense Matrix Core for Hyperpower Inverse Toolkit
Precision-generic dense arithmetic - the universal operand
"""

from dataclasses import dataclass
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.linalg.scalar import DOUBLE, ScalarConfig, is_finite_value
from src.utils.errors import ConfigurationError, ShapeError


class DenseMatrix:
    """Immutable rectangular matrix over a configurable scalar field.

    Double-precision matrices wrap float64/complex128 arrays; extended
    precision matrices wrap object arrays of mpmath numbers. Either way the
    array is read-only once the matrix exists.
    """

    __slots__ = ("_data", "config")

    def __init__(self, data: Any, config: ScalarConfig = DOUBLE):
        array = config.array(data)
        if array.ndim != 2:
            raise ShapeError(f"a matrix needs two dimensions, got shape {array.shape}")
        if array.shape[0] < 1 or array.shape[1] < 1:
            raise ShapeError(f"matrix dimensions must be positive, got {array.shape}")
        array.flags.writeable = False
        self._data = array
        self.config = config

    @classmethod
    def _wrap(cls, array: np.ndarray, config: ScalarConfig) -> "DenseMatrix":
        """Adopt an array whose entries already belong to config."""
        matrix = object.__new__(cls)
        if not config.is_extended:
            array = np.asarray(array, dtype=config.dtype)
        if array.flags.writeable:
            array.flags.writeable = False
        matrix._data = array
        matrix.config = config
        return matrix

    # -- shape ---------------------------------------------------------

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self._data.shape

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def entries(self) -> List[Any]:
        """Row-major entries."""
        return list(self._data.ravel())

    def entry(self, i: int, j: int):
        return self._data[i, j]

    def to_numpy(self) -> np.ndarray:
        """Copy as a plain float64/complex128 array (rounds extended values)."""
        if not self.config.is_extended:
            return np.array(self._data)
        if self.config.is_complex:
            return np.vectorize(complex, otypes=[np.complex128])(self._data)
        return np.vectorize(float, otypes=[np.float64])(self._data)

    def __repr__(self) -> str:
        return f"DenseMatrix({self.rows}x{self.cols}, {self.config.describe()})"

    # -- entrywise arithmetic (never counted as products) -------------------

    def _check_same(self, other: "DenseMatrix"):
        if not isinstance(other, DenseMatrix):
            raise TypeError(f"expected DenseMatrix, got {type(other).__name__}")
        if other.config != self.config:
            raise ConfigurationError(
                f"mixed scalar configurations: {self.config.describe()} vs {other.config.describe()}")
        if other.shape != self.shape:
            raise ShapeError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        self._check_same(other)
        return DenseMatrix._wrap(self._data + other._data, self.config)

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        self._check_same(other)
        return DenseMatrix._wrap(self._data - other._data, self.config)

    def __neg__(self) -> "DenseMatrix":
        return DenseMatrix._wrap(-self._data, self.config)

    def __mul__(self, scalar: Any) -> "DenseMatrix":
        if isinstance(scalar, DenseMatrix):
            raise TypeError("use matmul() for matrix products")
        return DenseMatrix._wrap(self._data * self.config.scalar(scalar), self.config)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Any) -> "DenseMatrix":
        return self * (self.config.one() / self.config.scalar(scalar))

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        return matmul(self, other)

    def is_finite(self) -> bool:
        if self.config.is_extended:
            return all(is_finite_value(value) for value in self._data.ravel())
        return bool(np.all(np.isfinite(self._data)))


@dataclass
class MatmulCounter:
    """Driver-local count of matrix-by-matrix products."""
    count: int = 0

    def multiply(self, a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
        return matmul(a, b, counter=self)

    def reset(self) -> int:
        """Return the current count and start again from zero."""
        value, self.count = self.count, 0
        return value


def matmul(a: DenseMatrix, b: DenseMatrix, counter: Optional[MatmulCounter] = None) -> DenseMatrix:
    """Product a·b at working precision; bumps counter when one is given."""
    if a.config != b.config:
        raise ConfigurationError(
            f"mixed scalar configurations: {a.config.describe()} vs {b.config.describe()}")
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    if counter is not None:
        counter.count += 1
    return DenseMatrix._wrap(a.data @ b.data, a.config)


def conj_transpose(a: DenseMatrix) -> DenseMatrix:
    """Hermitian transpose."""
    if a.config.is_complex:
        return DenseMatrix._wrap(np.conj(a.data).T.copy(), a.config)
    return DenseMatrix._wrap(a.data.T.copy(), a.config)


def identity(n: int, config: ScalarConfig = DOUBLE) -> DenseMatrix:
    return diag([1] * n, config)


def zeros(m: int, n: int, config: ScalarConfig = DOUBLE) -> DenseMatrix:
    if config.is_extended:
        array = np.full((m, n), config.zero(), dtype=object)
        return DenseMatrix._wrap(array, config)
    return DenseMatrix._wrap(np.zeros((m, n), dtype=config.dtype), config)


def diag(values: Sequence[Any], config: ScalarConfig = DOUBLE) -> DenseMatrix:
    """Square diagonal matrix."""
    n = len(values)
    if config.is_extended:
        array = np.full((n, n), config.zero(), dtype=object)
        for i, value in enumerate(values):
            array[i, i] = config.scalar(value)
        return DenseMatrix._wrap(array, config)
    array = np.zeros((n, n), dtype=config.dtype)
    for i, value in enumerate(values):
        array[i, i] = config.scalar(value)
    return DenseMatrix._wrap(array, config)


def from_rows(rows: Iterable[Iterable[Any]], config: ScalarConfig = DOUBLE) -> DenseMatrix:
    return DenseMatrix([list(row) for row in rows], config)


def diagonal(a: DenseMatrix) -> List[Any]:
    return [a.data[i, i] for i in range(min(a.rows, a.cols))]


def to_config(a: DenseMatrix, config: ScalarConfig) -> DenseMatrix:
    """Re-express a matrix in another scalar configuration.

    Promotion from double to extended is exact (binary values convert
    exactly); demotion rounds.
    """
    if a.config == config:
        return a
    if config.is_extended:
        return DenseMatrix(a.data, config)
    return DenseMatrix(a.to_numpy(), config)


def mat_pow(a: DenseMatrix, k: int, counter: Optional[MatmulCounter] = None) -> DenseMatrix:
    """k-fold product by repeated multiplication; k = 0 gives the identity."""
    if not a.is_square:
        raise ShapeError(f"matrix power needs a square matrix, got {a.rows}x{a.cols}")
    if k < 0:
        raise ValueError(f"power must be nonnegative, got {k}")
    result = identity(a.rows, a.config)
    for step in range(k):
        result = a if step == 0 else matmul(result, a, counter)
    return result


def trace(a: DenseMatrix):
    """Sum of the diagonal entries, accumulated in index order."""
    if not a.is_square:
        raise ShapeError(f"trace needs a square matrix, got {a.rows}x{a.cols}")
    total = a.config.zero()
    for i in range(a.rows):
        total = total + a.data[i, i]
    return a.config.scalar(total)
