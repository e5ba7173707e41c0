"""
Hyperpower iterations
Scheme catalog, PM coefficients, iteration driver and convergence diagnostics
"""

from src.iteration.coefficients import (
    PmCoefficients,
    evaluate_pm_polynomial,
    nonlinear_system_residuals,
    pm_coefficients,
    verify_pm_factorization,
)
from src.iteration.diagnostics import (
    coc_estimate,
    drazin_check,
    efficiency_index,
    outer_inverse_check,
    predicted_loops,
)
from src.iteration.driver import IterationRecord, IterationReport, StopKind, StopRule, Termination, iterate
from src.iteration.schemes import (
    CM,
    FM,
    HM,
    PM,
    PM8,
    PM_STABLE,
    SM,
    SchemeId,
    SchemeKind,
    hyperpower,
    residual,
    scheme_step,
)

__all__ = [
    "CM",
    "FM",
    "HM",
    "PM",
    "PM8",
    "PM_STABLE",
    "SM",
    "IterationRecord",
    "IterationReport",
    "PmCoefficients",
    "SchemeId",
    "SchemeKind",
    "StopKind",
    "StopRule",
    "Termination",
    "coc_estimate",
    "drazin_check",
    "efficiency_index",
    "evaluate_pm_polynomial",
    "hyperpower",
    "iterate",
    "nonlinear_system_residuals",
    "outer_inverse_check",
    "pm_coefficients",
    "predicted_loops",
    "residual",
    "scheme_step",
    "verify_pm_factorization",
]
