"""
Scheme Catalog for Hyperpower Inverse Toolkit
One-loop updates of the hyperpower family and their product counts
"""

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from src.iteration.coefficients import PmCoefficients, pm_coefficients
from src.linalg.dense import DenseMatrix, MatmulCounter, identity
from src.linalg.scalar import ScalarConfig
from src.utils.errors import ConfigurationError, DivergenceError, ShapeError
from src.utils.logging_setup import get_logger

logger = get_logger(__name__)


class SchemeKind(str, Enum):
    """Iteration families in the catalog."""
    SM = "SM"
    CM = "CM"
    FM = "FM"
    HM = "HM"
    PM = "PM"
    PM_STABLE = "PM_STABLE"
    PM8 = "PM8"
    HYPERPOWER = "HYPERPOWER"


# (order, nominal products per loop, description)
_CATALOG: Dict[SchemeKind, Tuple[int, int, str]] = {
    SchemeKind.SM: (2, 2, "Newton-Schulz X(2I - AX)"),
    SchemeKind.CM: (3, 3, "Chebyshev X(3I - AX(3I - AX))"),
    SchemeKind.FM: (7, 5, "seventh-order factorization X(I + (psi + psi^4)(I + psi + psi^2))"),
    SchemeKind.HM: (18, 9, "order-18 cyclotomic factorization"),
    SchemeKind.PM: (18, 7, "order-18 factorization with seven products"),
    SchemeKind.PM_STABLE: (18, 8, "PM followed by the projection X A X"),
    SchemeKind.PM8: (18, 8, "order-18 two-octic factorization with eight products"),
}

_HYPERPOWER_PATTERN = re.compile(r"^(?:HYPERPOWER|HP)[\s(:_-]*(\d+)\)?$")


@dataclass(frozen=True)
class SchemeId:
    """A catalog entry; order is only stored for the generic hyperpower family."""
    kind: SchemeKind
    p: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.kind, SchemeKind):
            object.__setattr__(self, "kind", SchemeKind(self.kind))
        if self.kind is SchemeKind.HYPERPOWER:
            if self.p is None or self.p < 2:
                raise ConfigurationError(f"HYPERPOWER needs an order p >= 2, got {self.p}")
        elif self.p is not None:
            raise ConfigurationError(f"{self.kind.value} has a fixed order")

    @property
    def order(self) -> int:
        if self.kind is SchemeKind.HYPERPOWER:
            return self.p
        return _CATALOG[self.kind][0]

    @property
    def nominal_products(self) -> int:
        """Products per loop as catalogued (PM_STABLE's nominal claim is 8)."""
        if self.kind is SchemeKind.HYPERPOWER:
            return self.p
        return _CATALOG[self.kind][1]

    @property
    def description(self) -> str:
        if self.kind is SchemeKind.HYPERPOWER:
            return f"truncated Neumann series with {self.p} terms"
        return _CATALOG[self.kind][2]

    @property
    def label(self) -> str:
        if self.kind is SchemeKind.HYPERPOWER:
            return f"HYPERPOWER({self.p})"
        return self.kind.value

    def __str__(self) -> str:
        return self.label

    @classmethod
    def parse(cls, text: str) -> "SchemeId":
        """Accepts 'PM', 'pm-stable', 'HYPERPOWER(5)', 'hyperpower:5' or 'HP5'."""
        key = text.strip().upper().replace("-", "_")
        match = _HYPERPOWER_PATTERN.match(key)
        if match:
            return cls(SchemeKind.HYPERPOWER, int(match.group(1)))
        try:
            return cls(SchemeKind(key))
        except ValueError:
            raise ConfigurationError(f"unknown scheme {text!r}; expected one of {', '.join(catalog_names())}")


def hyperpower(p: int) -> SchemeId:
    return SchemeId(SchemeKind.HYPERPOWER, p)


SM = SchemeId(SchemeKind.SM)
CM = SchemeId(SchemeKind.CM)
FM = SchemeId(SchemeKind.FM)
HM = SchemeId(SchemeKind.HM)
PM = SchemeId(SchemeKind.PM)
PM_STABLE = SchemeId(SchemeKind.PM_STABLE)
PM8 = SchemeId(SchemeKind.PM8)


def catalog_names() -> List[str]:
    return [kind.value for kind in _CATALOG] + ["HYPERPOWER(p)"]


@lru_cache(maxsize=32)
def _cached_coefficients(config: ScalarConfig) -> PmCoefficients:
    return pm_coefficients(config)


def _check_conformable(a: DenseMatrix, x: DenseMatrix):
    if x.rows != a.cols or x.cols != a.rows:
        raise ShapeError(f"X must be {a.cols}x{a.rows} for A of shape {a.rows}x{a.cols}, got {x.rows}x{x.cols}")


def residual(a: DenseMatrix, x: DenseMatrix, counter: Optional[MatmulCounter] = None) -> DenseMatrix:
    """I_m - A X with exactly one product."""
    _check_conformable(a, x)
    counter = counter if counter is not None else MatmulCounter()
    return identity(a.rows, a.config) - counter.multiply(a, x)


def _sm(a, x, eye, mul):
    y = mul(a, x)
    return mul(x, 2 * eye - y)


def _cm(a, x, eye, mul):
    y = mul(a, x)
    w = mul(y, 3 * eye - y)
    return mul(x, 3 * eye - w)


def _fm(a, x, eye, mul):
    psi = eye - mul(a, x)
    psi2 = mul(psi, psi)
    psi4 = mul(psi2, psi2)
    zeta = eye + psi + psi2
    upsilon = psi + psi4
    return mul(x, eye + mul(upsilon, zeta))


def _hm(a, x, eye, mul):
    r = eye - mul(a, x)
    r2 = mul(r, r)
    r3 = mul(r2, r)
    r6 = mul(r3, r3)
    product = mul(eye + r, r2 - r + eye)
    product = mul(product, r2 + r + eye)
    product = mul(product, r6 - r3 + eye)
    product = mul(product, r6 + r3 + eye)
    return mul(x, product)


def _pm_half(a, x, eye, mul, c: PmCoefficients):
    r = eye - mul(a, x)
    r2 = mul(r, r)
    r4 = mul(r2, r2)
    m = mul(eye + c.c1 * r2 + r4, eye + c.c2 * r2 + r4)
    t = m + c.c3 * r2
    s = m + c.d1 * r2 + c.d2 * r4
    b = mul(t, s) + c.mu * r2 + c.psi * r4
    d = mul(eye + r, b)
    return mul(x, d)


def _pm_stable(a, x, eye, mul, c: PmCoefficients):
    half = _pm_half(a, x, eye, mul, c)
    y = mul(a, half)
    return mul(half, y)


def _pm8(a, x, eye, mul, c: PmCoefficients):
    r = eye - mul(a, x)
    r2 = mul(r, r)
    r4 = mul(r2, r2)
    r6 = mul(r4, r2)
    r8 = mul(r4, r4)
    first = eye + c.a1 * r2 + c.a2 * r4 + c.a3 * r6 + r8
    second = eye + c.b1 * r2 + c.b2 * r4 + c.b3 * r6 + r8
    b = mul(first, second) + c.mu * r2 + c.psi * r4
    return mul(x, mul(eye + r, b))


def _hyperpower(a, x, eye, mul, p: int):
    r = eye - mul(a, x)
    series = eye + r
    for _ in range(p - 2):
        series = eye + mul(r, series)
    return mul(x, series)


def scheme_step(scheme: SchemeId, a: DenseMatrix, x: DenseMatrix,
                counter: Optional[MatmulCounter] = None,
                coefficients: Optional[PmCoefficients] = None) -> DenseMatrix:
    """One full loop of the named scheme.

    Every matrix product goes through counter, so after the call its count
    has grown by exactly the scheme's per-loop product count. A result with
    non-finite entries raises DivergenceError.
    """
    _check_conformable(a, x)
    if a.config != x.config:
        raise ConfigurationError(f"A is {a.config.describe()} but X is {x.config.describe()}")
    counter = counter if counter is not None else MatmulCounter()
    mul = counter.multiply
    eye = identity(a.rows, a.config)

    kind = scheme.kind
    if kind in (SchemeKind.PM, SchemeKind.PM_STABLE, SchemeKind.PM8):
        coeffs = coefficients if coefficients is not None else _cached_coefficients(a.config.with_kind("real"))
        if kind is SchemeKind.PM:
            result = _pm_half(a, x, eye, mul, coeffs)
        elif kind is SchemeKind.PM_STABLE:
            result = _pm_stable(a, x, eye, mul, coeffs)
        else:
            result = _pm8(a, x, eye, mul, coeffs)
    elif kind is SchemeKind.SM:
        result = _sm(a, x, eye, mul)
    elif kind is SchemeKind.CM:
        result = _cm(a, x, eye, mul)
    elif kind is SchemeKind.FM:
        result = _fm(a, x, eye, mul)
    elif kind is SchemeKind.HM:
        result = _hm(a, x, eye, mul)
    else:
        result = _hyperpower(a, x, eye, mul, scheme.p)

    if not result.is_finite():
        raise DivergenceError(f"{scheme.label} produced non-finite entries", partial=x)
    return result
