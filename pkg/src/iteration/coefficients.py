"""
PM Coefficients for Hyperpower Inverse Toolkit
Closed-form coefficient set, nonlinear-system residuals and the factorization verifier
"""

from dataclasses import dataclass, fields, replace
from typing import Any, Dict, List, Sequence

from src.linalg.scalar import DOUBLE, ScalarConfig, to_float
from src.utils.errors import ConfigurationError
from src.utils.logging_setup import get_logger

logger = get_logger(__name__)

# Human-readable closed forms, in field order.
CLOSED_FORMS: Dict[str, str] = {
    "a1": "5(31+sqrt(93))/496",
    "a2": "(3+sqrt(93))/8",
    "a3": "1/2",
    "b1": "-5(sqrt(93)-31)/496",
    "b2": "(3-sqrt(93))/8",
    "b3": "1/2",
    "mu": "3/8",
    "psi": "321/1984",
    "c1": "(sqrt(27-2sqrt(93))+1)/4",
    "c2": "(1-sqrt(27-2sqrt(93)))/4",
    "c3": "(5sqrt(93)-93)/496",
    "d1": "(-93-5sqrt(93))/496",
    "d2": "-sqrt(93)/4",
}

PM_DEGREE = 17


@dataclass(frozen=True)
class PmCoefficients:
    """Thirteen real parameters of the seven-product order-18 factorization.

    a and b parametrize the two octic factors in t^2, mu and psi the
    correction terms, c and d the split of each octic into the shared
    quartic product M.
    """
    a1: Any
    a2: Any
    a3: Any
    b1: Any
    b2: Any
    b3: Any
    mu: Any
    psi: Any
    c1: Any
    c2: Any
    c3: Any
    d1: Any
    d2: Any
    config: ScalarConfig = DOUBLE

    @property
    def names(self) -> List[str]:
        return [f.name for f in fields(self) if f.name != "config"]

    def as_dict(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in self.names}

    def perturbed(self, **deltas: float) -> "PmCoefficients":
        """Copy with the named coefficients shifted by the given amounts."""
        unknown = set(deltas) - set(self.names)
        if unknown:
            raise ConfigurationError(f"unknown coefficient(s): {', '.join(sorted(unknown))}")
        shifted = {name: getattr(self, name) + self.config.real(delta) for name, delta in deltas.items()}
        return replace(self, **shifted)


def pm_coefficients(config: ScalarConfig = DOUBLE) -> PmCoefficients:
    """Evaluate the closed forms at the working precision."""
    if config.is_complex:
        config = config.with_kind("real")
    r = config.rational
    s93 = config.sqrt(93)
    inner = config.sqrt(27 - 2 * s93)
    half = r(1, 2)
    return PmCoefficients(
        a1=5 * (31 + s93) / 496,
        a2=(3 + s93) / 8,
        a3=half,
        b1=-5 * (s93 - 31) / 496,
        b2=(3 - s93) / 8,
        b3=half,
        mu=r(3, 8),
        psi=r(321, 1984),
        c1=(inner + 1) / 4,
        c2=(1 - inner) / 4,
        c3=(5 * s93 - 93) / 496,
        d1=(-93 - 5 * s93) / 496,
        d2=-s93 / 4,
        config=config,
    )


def nonlinear_system_residuals(coeffs: PmCoefficients) -> Dict[str, Any]:
    """Residuals of the three systems fixing the coefficients.

    The seven-equation system matches the octic product to sum_{j<=8} u^j
    (u = t^2); the c system splits the a-octic as M + c3 u, the d system
    the b-octic as M + d1 u + d2 u^2.
    """
    c = coeffs
    one = c.config.one()
    residuals = {
        "ab.u1": c.mu + c.a1 + c.b1 - one,
        "ab.u2": c.a2 + c.psi + c.a1 * c.b1 + c.b2 - one,
        "ab.u3": c.a3 + c.b3 + c.a2 * c.b1 + c.a1 * c.b2 - one,
        "ab.u4": 2 + c.a1 * c.b3 + c.a3 * c.b1 + c.a2 * c.b2 - one,
        "ab.u5": c.a1 + c.a2 * c.b3 + c.b1 + c.a3 * c.b2 - one,
        "ab.u6": c.a2 + c.a3 * c.b3 + c.b2 - one,
        "ab.u7": c.a3 + c.b3 - one,
        "c.u1": c.c1 + c.c2 + c.c3 - c.a1,
        "c.u2": 2 + c.c1 * c.c2 - c.a2,
        "c.u3": c.c1 + c.c2 - c.a3,
        "d.u1": c.c1 + c.c2 + c.d1 - c.b1,
        "d.u2": 2 + c.c1 * c.c2 + c.d2 - c.b2,
        "d.u3": c.c1 + c.c2 - c.b3,
    }
    return {name: abs(value) for name, value in residuals.items()}


# -- polynomial helpers (coefficient lists, lowest degree first) --------------


def _poly_mul(p: Sequence[Any], q: Sequence[Any], zero) -> List[Any]:
    out = [zero] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] = out[i + j] + pi * qj
    return out


def _poly_add(p: Sequence[Any], q: Sequence[Any], zero) -> List[Any]:
    size = max(len(p), len(q))
    p = list(p) + [zero] * (size - len(p))
    q = list(q) + [zero] * (size - len(q))
    return [a + b for a, b in zip(p, q)]


def pm_polynomial(coeffs: PmCoefficients) -> List[Any]:
    """Coefficients of (1+t)[(M+c3 t^2)(M+d1 t^2+d2 t^4) + mu t^2 + psi t^4]."""
    c = coeffs
    zero, one = c.config.zero(), c.config.one()
    quartic1 = [one, zero, c.c1, zero, one]
    quartic2 = [one, zero, c.c2, zero, one]
    m = _poly_mul(quartic1, quartic2, zero)
    t_factor = _poly_add(m, [zero, zero, c.c3], zero)
    s_factor = _poly_add(m, [zero, zero, c.d1, zero, c.d2], zero)
    b = _poly_add(_poly_mul(t_factor, s_factor, zero), [zero, zero, c.mu, zero, c.psi], zero)
    return _poly_mul([one, one], b, zero)


@dataclass
class FactorizationCheck:
    """Outcome of comparing the factored polynomial with sum_{i<=17} t^i."""
    ok: bool
    max_coefficient_error: Any
    coefficient_errors: List[Any]
    tolerance: Any

    @property
    def worst_degree(self) -> int:
        return max(range(len(self.coefficient_errors)), key=lambda i: self.coefficient_errors[i])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "max_coefficient_error": to_float(self.max_coefficient_error),
            "worst_degree": self.worst_degree,
            "tolerance": to_float(self.tolerance),
        }


def verify_pm_factorization(coeffs: PmCoefficients, tol: Any) -> FactorizationCheck:
    """Expand the factored form and compare coefficient-wise with sum t^i."""
    expanded = pm_polynomial(coeffs)
    one, zero = coeffs.config.one(), coeffs.config.zero()
    target = [one] * (PM_DEGREE + 1)
    size = max(len(expanded), len(target))
    expanded = expanded + [zero] * (size - len(expanded))
    target = target + [zero] * (size - len(target))
    errors = [abs(e - t) for e, t in zip(expanded, target)]
    worst = max(errors)
    tol = coeffs.config.real(tol)
    check = FactorizationCheck(ok=bool(worst <= tol), max_coefficient_error=worst,
                               coefficient_errors=errors, tolerance=tol)
    logger.debug(f"factorization check at {coeffs.config.describe()}: "
                 f"max error {to_float(worst):.3e} (t^{check.worst_degree})")
    return check


def evaluate_pm_polynomial(coeffs: PmCoefficients, t: Any):
    """Value of the factored polynomial at t; t = 1 gives 18."""
    c = coeffs
    t = c.config.real(t)
    u = t * t
    m = (1 + c.c1 * u + u * u) * (1 + c.c2 * u + u * u)
    b = (m + c.c3 * u) * (m + c.d1 * u + c.d2 * u * u) + c.mu * u + c.psi * u * u
    return (1 + t) * b
