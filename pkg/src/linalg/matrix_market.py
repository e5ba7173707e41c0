"""
MatrixMarket Exchange for Hyperpower Inverse Toolkit
Reader and writer for coordinate and array files
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Tuple, Union

import numpy as np

from src.linalg.dense import DenseMatrix
from src.linalg.scalar import DOUBLE, ScalarConfig, ScalarKind
from src.utils.errors import MatrixMarketError
from src.utils.logging_setup import get_logger

logger = get_logger(__name__)

BANNER = "%%MatrixMarket"
FORMATS = ("coordinate", "array")
FIELDS = ("real", "complex", "integer")
SYMMETRIES = ("general", "symmetric", "hermitian", "skew-symmetric")

PathLike = Union[str, Path]


@dataclass
class MarketPayload:
    """Parsed file contents with symmetric storage already expanded.

    entries holds 0-based (row, col, value) triplets in file order followed
    by their mirrored counterparts.
    """
    format: str
    field: str
    symmetry: str
    rows: int
    cols: int
    entries: List[Tuple[int, int, Any]] = field(default_factory=list)

    @property
    def is_complex(self) -> bool:
        return self.field == "complex"


def _parse_value(tokens: List[str], field_name: str, config: ScalarConfig, where: str):
    try:
        if field_name == "complex":
            if len(tokens) != 2:
                raise MatrixMarketError(f"{where}: complex entry needs two numbers")
            if config.is_extended:
                ctx = config.context
                return ctx.mpc(ctx.mpf(tokens[0]), ctx.mpf(tokens[1]))
            return complex(float(tokens[0]), float(tokens[1]))
        if len(tokens) != 1:
            raise MatrixMarketError(f"{where}: expected one number, got {len(tokens)}")
        if field_name == "integer":
            return int(tokens[0])
        if config.is_extended:
            return config.context.mpf(tokens[0])
        return float(tokens[0])
    except ValueError as e:
        raise MatrixMarketError(f"{where}: cannot parse {' '.join(tokens)!r}: {e}")


def _mirror(value: Any, symmetry: str):
    if symmetry == "skew-symmetric":
        return -value
    if symmetry == "hermitian":
        return value.conjugate()
    return value


def read_matrix_market(path: PathLike, config: ScalarConfig = DOUBLE) -> MarketPayload:
    """Parse a MatrixMarket file into expanded 0-based triplets."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise MatrixMarketError(f"cannot read {path}: {e}")
    if not lines or not lines[0].startswith(BANNER):
        raise MatrixMarketError(f"{path}: missing {BANNER} banner")

    header = lines[0].split()
    if len(header) != 5 or header[1].lower() != "matrix":
        raise MatrixMarketError(f"{path}: malformed banner {lines[0]!r}")
    fmt, field_name, symmetry = (token.lower() for token in header[2:])
    if fmt not in FORMATS:
        raise MatrixMarketError(f"{path}: unsupported format {fmt!r}")
    if field_name not in FIELDS:
        raise MatrixMarketError(f"{path}: unsupported field {field_name!r}")
    if symmetry not in SYMMETRIES:
        raise MatrixMarketError(f"{path}: unsupported symmetry {symmetry!r}")
    if symmetry == "hermitian" and field_name != "complex":
        raise MatrixMarketError(f"{path}: hermitian symmetry needs a complex field")

    body = [(number, line) for number, line in enumerate(lines[1:], start=2)
            if line.strip() and not line.lstrip().startswith("%")]
    if not body:
        raise MatrixMarketError(f"{path}: missing size line")
    size_number, size_line = body[0]
    try:
        sizes = [int(token) for token in size_line.split()]
    except ValueError:
        raise MatrixMarketError(f"{path}:{size_number}: malformed size line {size_line!r}")

    expected_sizes = 3 if fmt == "coordinate" else 2
    if len(sizes) != expected_sizes:
        raise MatrixMarketError(f"{path}:{size_number}: expected {expected_sizes} integers on the size line")
    rows, cols = sizes[0], sizes[1]
    if rows < 1 or cols < 1:
        raise MatrixMarketError(f"{path}: dimensions must be positive, got {rows}x{cols}")
    if symmetry != "general" and rows != cols:
        raise MatrixMarketError(f"{path}: {symmetry} storage needs a square matrix")

    payload = MarketPayload(fmt, field_name, symmetry, rows, cols)
    data = body[1:]

    if fmt == "coordinate":
        if len(data) != sizes[2]:
            raise MatrixMarketError(f"{path}: header announces {sizes[2]} entries, found {len(data)}")
        for number, line in data:
            tokens = line.split()
            where = f"{path}:{number}"
            if len(tokens) < 3:
                raise MatrixMarketError(f"{where}: coordinate entry needs indices and a value")
            try:
                i, j = int(tokens[0]) - 1, int(tokens[1]) - 1
            except ValueError:
                raise MatrixMarketError(f"{where}: malformed indices")
            if not (0 <= i < rows and 0 <= j < cols):
                raise MatrixMarketError(f"{where}: index ({i + 1}, {j + 1}) outside {rows}x{cols}")
            payload.entries.append((i, j, _parse_value(tokens[2:], field_name, config, where)))
    else:
        # column-major; non-general storage lists the lower triangle only
        positions = [(i, j) for j in range(cols) for i in range(rows)
                     if symmetry == "general" or i > j or (i == j and symmetry != "skew-symmetric")]
        if len(data) != len(positions):
            raise MatrixMarketError(f"{path}: expected {len(positions)} array values, found {len(data)}")
        for (i, j), (number, line) in zip(positions, data):
            payload.entries.append((i, j, _parse_value(line.split(), field_name, config, f"{path}:{number}")))

    if symmetry != "general":
        mirrored = [(j, i, _mirror(value, symmetry)) for i, j, value in payload.entries if i != j]
        payload.entries.extend(mirrored)

    logger.debug(f"read {path}: {fmt} {field_name} {symmetry} {rows}x{cols}, {len(payload.entries)} entries")
    return payload


def payload_config(payload: MarketPayload, config: ScalarConfig) -> ScalarConfig:
    """config, promoted to complex when the file holds complex values."""
    if payload.is_complex and not config.is_complex:
        return config.with_kind(ScalarKind.COMPLEX)
    return config


def read_dense(path: PathLike, config: ScalarConfig = DOUBLE) -> DenseMatrix:
    """Read any MatrixMarket file as a DenseMatrix (duplicates are summed)."""
    payload = read_matrix_market(path, config)
    config = payload_config(payload, config)
    if config.is_extended:
        array = np.full((payload.rows, payload.cols), config.zero(), dtype=object)
    else:
        array = np.zeros((payload.rows, payload.cols), dtype=config.dtype)
    for i, j, value in payload.entries:
        array[i, j] = array[i, j] + config.scalar(value)
    return DenseMatrix(array, config)


def format_value(value: Any, config: ScalarConfig) -> str:
    """Shortest round-trip text at double; the working digit count otherwise."""
    if config.is_extended:
        ctx = config.context
        if config.is_complex:
            value = ctx.mpc(value)
            return f"{ctx.nstr(value.real, config.digits)} {ctx.nstr(value.imag, config.digits)}"
        return ctx.nstr(ctx.mpf(value), config.digits)
    if config.is_complex:
        value = complex(value)
        return f"{value.real!r} {value.imag!r}"
    return repr(float(value))


def _field_name(config: ScalarConfig) -> str:
    return "complex" if config.is_complex else "real"


def write_dense(path: PathLike, matrix: DenseMatrix, comment: str = "") -> Path:
    """Write a DenseMatrix as a general array file (column-major)."""
    path = Path(path)
    config = matrix.config
    lines = [f"{BANNER} matrix array {_field_name(config)} general"]
    if comment:
        lines.extend(f"% {text}" for text in comment.splitlines())
    lines.append(f"{matrix.rows} {matrix.cols}")
    for j in range(matrix.cols):
        for i in range(matrix.rows):
            lines.append(format_value(matrix.entry(i, j), config))
    _write_lines(path, lines)
    logger.debug(f"wrote {path}: array {matrix.rows}x{matrix.cols}")
    return path


def write_coordinate(path: PathLike, rows: int, cols: int, entries: List[Tuple[int, int, Any]],
                     config: ScalarConfig = DOUBLE, comment: str = "") -> Path:
    """Write 0-based triplets as a general coordinate file."""
    path = Path(path)
    lines = [f"{BANNER} matrix coordinate {_field_name(config)} general"]
    if comment:
        lines.extend(f"% {text}" for text in comment.splitlines())
    lines.append(f"{rows} {cols} {len(entries)}")
    for i, j, value in entries:
        lines.append(f"{i + 1} {j + 1} {format_value(value, config)}")
    _write_lines(path, lines)
    logger.debug(f"wrote {path}: coordinate {rows}x{cols}, {len(entries)} entries")
    return path


def _write_lines(path: Path, lines: List[str]):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as e:
        raise MatrixMarketError(f"cannot write {path}: {e}")
