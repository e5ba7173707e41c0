"""
Bench Commands for Hyperpower Inverse Toolkit
Experiment drivers behind the command line: coefficients, Drazin table, Hilbert runs,
GMRES preconditioning and one-off inversion
"""

import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, TextIO, Tuple

import numpy as np
import pandas as pd

from src.bench.config import ExperimentConfig
from src.initialization.strategies import InitKind, init_drazin, initialize, parse_init_strategy
from src.iteration.coefficients import (
    CLOSED_FORMS,
    evaluate_pm_polynomial,
    nonlinear_system_residuals,
    pm_coefficients,
    verify_pm_factorization,
)
from src.iteration.diagnostics import drazin_check, outer_inverse_check
from src.iteration.driver import StopRule, iterate
from src.iteration.schemes import SchemeId
from src.krylov.gmres import GmresConfig, gmres
from src.krylov.preconditioner import build_preconditioner, jacobi_preconditioner
from src.krylov.problems import ones_rhs, random_rhs, shifted_laplacian
from src.krylov.sparse import SparseMatrix, read_sparse, read_vector
from src.linalg.generators import drazin_example_matrix, hilbert
from src.linalg.matrix_market import read_dense, write_dense
from src.linalg.norms import NormKind, norm
from src.linalg.scalar import DOUBLE, ScalarConfig, extended, to_float
from src.utils.config_simple import get_config, get_precision_config
from src.utils.errors import ConfigurationError, DivergenceError, HyperInverseError
from src.utils.logging_setup import get_logger

logger = get_logger(__name__)

DOUBLE_TOLERANCE = 1e-12
EXTENDED_TOLERANCE = 1e-140
VERIFY_DIGITS = 150
TABLE_DIGITS_MINIMUM = 150
TABLE_EPSILON = 1e-50
FALLBACK_EPSILON = 1e-10

DRAZIN_SCHEMES = ["SM", "CM", "FM", "PM"]
HILBERT_SCHEMES = ["SM", "CM", "HM", "PM"]
PRECOND_CONFIGURATIONS = ["none", "jacobi", "SM:5", "CM:3", "PM:1"]


@dataclass
class CommandResult:
    """Exit status plus whatever the command tabulated."""
    exit_code: int
    frame: Optional[pd.DataFrame] = None
    payload: Dict[str, Any] = field(default_factory=dict)


# -- shared helpers -----------------------------------------------------------


def _threads(cfg: ExperimentConfig) -> int:
    return cfg.threads or get_config().threads


def fan_out(task: Callable[[Any], Any], items: Iterable[Any], threads: int) -> List[Any]:
    """Run task over items on worker threads; results come back in item order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [task(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(task, items))


def _scalar_config(cfg: ExperimentConfig) -> ScalarConfig:
    return extended(cfg.digits) if cfg.digits else DOUBLE


def _csv_path(out: str, suffix: str = "") -> Path:
    path = Path(out)
    stem = path.with_suffix("") if path.suffix.lower() == ".csv" else path
    return stem.parent / f"{stem.name}{suffix}.csv"


def _write_csv(frame: pd.DataFrame, out: Optional[str], suffix: str = "") -> Optional[Path]:
    if not out:
        return None
    path = _csv_path(out, suffix)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info(f"wrote {path}")
    return path


def _print_frame(title: str, frame: pd.DataFrame, stream: TextIO):
    print(title, file=stream)
    print(frame.to_string(index=False), file=stream)
    print(file=stream)


def _parse_norm(cfg: ExperimentConfig, default: NormKind) -> NormKind:
    try:
        return NormKind.parse(cfg.norm) if cfg.norm else default
    except ValueError:
        raise ConfigurationError(f"unknown norm {cfg.norm!r}; expected one, infinity, frobenius or spectral-estimate")


# -- verify-coeffs ------------------------------------------------------------


def cmd_verify_coeffs(cfg: ExperimentConfig, stream: TextIO = sys.stdout) -> CommandResult:
    """Coefficients, nonlinear-system residuals and the polynomial identity at two precisions."""
    digits = cfg.digits or VERIFY_DIGITS
    double = pm_coefficients(DOUBLE)
    precise = pm_coefficients(extended(digits))
    if cfg.perturb:
        logger.warning(f"perturbing coefficients: {cfg.perturb}")
        double = double.perturbed(**cfg.perturb)
        precise = precise.perturbed(**cfg.perturb)

    ctx = precise.config.context
    coefficient_rows = [
        {"name": name, "closed_form": CLOSED_FORMS[name],
         "value": ctx.nstr(getattr(precise, name), 30), "double": repr(float(getattr(double, name)))}
        for name in double.names
    ]
    coefficients = pd.DataFrame(coefficient_rows)

    double_res = nonlinear_system_residuals(double)
    precise_res = nonlinear_system_residuals(precise)
    residuals = pd.DataFrame([
        {"equation": name, "double": to_float(double_res[name]), "extended": to_float(precise_res[name])}
        for name in double_res
    ])

    double_check = verify_pm_factorization(double, DOUBLE_TOLERANCE)
    precise_check = verify_pm_factorization(precise, EXTENDED_TOLERANCE)
    polynomial = pd.DataFrame([
        {"degree": degree, "double": to_float(d), "extended": to_float(e)}
        for degree, (d, e) in enumerate(zip(double_check.coefficient_errors, precise_check.coefficient_errors))
    ])
    at_one = evaluate_pm_polynomial(precise, 1)

    systems_ok = (max(double_res.values()) <= DOUBLE_TOLERANCE
                  and max(precise_res.values()) <= precise.config.real(EXTENDED_TOLERANCE))
    ok = systems_ok and double_check.ok and precise_check.ok

    _print_frame("PM coefficients", coefficients, stream)
    _print_frame(f"nonlinear system residuals (double / {digits} digits)", residuals, stream)
    _print_frame("polynomial coefficient errors against sum of t^i, i <= 17", polynomial, stream)
    print(f"factored polynomial at t = 1: {ctx.nstr(at_one, 20)}", file=stream)
    print(f"max coefficient error: double {to_float(double_check.max_coefficient_error):.3e} "
          f"(t^{double_check.worst_degree}), extended {to_float(precise_check.max_coefficient_error):.3e} "
          f"(t^{precise_check.worst_degree})", file=stream)
    print("PASS" if ok else "FAIL", file=stream)

    _write_csv(coefficients, cfg.out)
    if not ok:
        logger.error("coefficient verification failed")
    return CommandResult(
        exit_code=0 if ok else 1,
        frame=coefficients,
        payload={
            "residuals": residuals,
            "polynomial": polynomial,
            "double": double_check.to_dict(),
            "extended": precise_check.to_dict(),
            "value_at_one": to_float(at_one),
        },
    )


# -- drazin-table -------------------------------------------------------------


def cmd_drazin_table(cfg: ExperimentConfig, stream: TextIO = sys.stdout) -> CommandResult:
    """Iteration counts, final steps and estimated orders on the index-3 test matrix."""
    digits = cfg.digits if cfg.digits is not None else get_precision_config().extended_digits
    names = cfg.schemes or DRAZIN_SCHEMES
    schemes = [SchemeId.parse(name) for name in names]
    if digits < TABLE_DIGITS_MINIMUM:
        logger.warning(f"{digits} digits cannot reach epsilon {TABLE_EPSILON:g}; "
                       f"falling back to machine double with relative epsilon {FALLBACK_EPSILON:g}")
        config = DOUBLE
        epsilon = FALLBACK_EPSILON
        relative = True
        if any(scheme.label == "FM" for scheme in schemes):
            logger.info("FM row is only reported at extended precision; dropping it")
            schemes = [scheme for scheme in schemes if scheme.label != "FM"]
    else:
        config = extended(digits)
        epsilon = cfg.epsilon or TABLE_EPSILON
        relative = False
    kind = _parse_norm(cfg, NormKind.INFINITY)

    a = drazin_example_matrix(config)
    x0, alpha, index = init_drazin(a)
    stop = StopRule.step(epsilon, kind, max_loops=cfg.max_loops, relative=relative)
    logger.info(f"Drazin table at {config.describe()}: index {index}, epsilon {epsilon:g}")

    def run(scheme: SchemeId) -> Dict[str, Any]:
        started = time.perf_counter()
        try:
            report = iterate(scheme, a, x0, stop)
        except DivergenceError as e:
            report = e.report
        check = drazin_check(a, report.x, index, kind)
        return {
            "scheme": scheme.label,
            "IT": report.loops,
            "final_step": to_float(report.final_step_norm) if report.final_step_norm is not None else np.nan,
            "rho": report.coc if report.coc is not None else np.nan,
            "products_per_loop": report.matmuls_per_loop,
            "terminated": report.terminated.value,
            "drazin_residual": check.worst(),
            "seconds": time.perf_counter() - started,
        }

    frame = pd.DataFrame(fan_out(run, schemes, _threads(cfg)))
    display = frame.copy()
    display["final_step"] = display["final_step"].map(lambda v: f"{v:.3e}")
    display["rho"] = display["rho"].map(lambda v: f"{v:.2f}")
    _print_frame(f"Drazin inverse of the index-{index} test matrix ({config.describe()}, eps={epsilon:g})",
                 display, stream)
    _write_csv(frame.drop(columns=["seconds"]), cfg.out)
    return CommandResult(exit_code=0, frame=frame,
                         payload={"index": index, "epsilon": epsilon, "relative": relative})


# -- hilbert-bench ------------------------------------------------------------


def cmd_hilbert_bench(cfg: ExperimentConfig, stream: TextIO = sys.stdout) -> CommandResult:
    """Moore-Penrose inverses of rectangular Hilbert matrices with the reliable stop rule."""
    schemes = [SchemeId.parse(name) for name in (cfg.schemes or HILBERT_SCHEMES)]
    config = _scalar_config(cfg)
    strategy = parse_init_strategy(cfg.init or "pan-schreiber")
    kind = _parse_norm(cfg, NormKind.FROBENIUS)

    prepared: Dict[Tuple[int, int], Any] = {}
    for m, n in cfg.parsed_sizes():
        a = hilbert(m, n, config)
        prepared[(m, n)] = (a, initialize(a, strategy))
    instances = [(size, epsilon, scheme) for size in prepared for epsilon in cfg.epsilons for scheme in schemes]

    def run(instance) -> Dict[str, Any]:
        (m, n), epsilon, scheme = instance
        a, init = prepared[(m, n)]
        row: Dict[str, Any] = {"size": f"{m}x{n}", "epsilon": epsilon, "scheme": scheme.label}
        started = time.perf_counter()
        try:
            stop = StopRule.reliable(scheme.order, init.alpha, epsilon, kind, max_loops=cfg.max_loops)
            report = iterate(scheme, a, init.x0, stop)
        except DivergenceError as e:
            logger.error(f"H_{m}x{n} {scheme.label} eps={epsilon:g}: {e}")
            report = e.report
        except HyperInverseError as e:
            logger.error(f"H_{m}x{n} {scheme.label} eps={epsilon:g}: {e}")
            row.update({"loops": 0, "total_products": 0, "terminated": type(e).__name__,
                        "seconds": time.perf_counter() - started})
            return row
        elapsed = time.perf_counter() - started
        scale = max(to_float(norm(report.x, NormKind.FROBENIUS)), 1.0)
        residuals = outer_inverse_check(a, report.x, NormKind.FROBENIUS)
        row.update({
            "loops": report.loops,
            "total_products": report.total_matmuls,
            "terminated": report.terminated.value,
            "outer": residuals.outer / scale,
            "inner": residuals.inner / scale,
            "sym_ax": residuals.sym_ax / scale,
            "sym_xa": residuals.sym_xa / scale,
            "seconds": elapsed,
        })
        return row

    frame = pd.DataFrame(fan_out(run, instances, _threads(cfg)))
    _print_frame(f"Hilbert Moore-Penrose runs ({config.describe()}, init {strategy.name})", frame, stream)
    _write_csv(frame.drop(columns=["seconds"]), cfg.out)
    return CommandResult(exit_code=0, frame=frame)


# -- precond-bench ------------------------------------------------------------


def _build_configuration(a: SparseMatrix, label: str, threshold: Optional[float]) -> Optional[SparseMatrix]:
    key = label.strip().lower()
    if key == "none":
        return None
    if key == "jacobi":
        return jacobi_preconditioner(a)
    name, sep, loops = label.partition(":")
    if not sep:
        raise ConfigurationError(f"preconditioner {label!r} must be none, jacobi or NAME:loops")
    try:
        count = int(loops)
    except ValueError:
        raise ConfigurationError(f"preconditioner {label!r} has a non-integer loop count")
    return build_preconditioner(a, SchemeId.parse(name), count, threshold)


def _right_hand_side(cfg: ExperimentConfig, n: int) -> np.ndarray:
    """All ones by default; "random" draws one from --seed; anything else is a MatrixMarket file."""
    if not cfg.rhs:
        return ones_rhs(n)
    if cfg.rhs.strip().lower() == "random":
        logger.info(f"random right-hand side from seed {cfg.seed}")
        return random_rhs(n, cfg.seed)
    return read_vector(cfg.rhs)


def cmd_precond_bench(cfg: ExperimentConfig, stream: TextIO = sys.stdout) -> CommandResult:
    """GMRES iteration counts with and without hyperpower approximate inverses."""
    a = read_sparse(cfg.matrix) if cfg.matrix else shifted_laplacian(cfg.grid)
    b = _right_hand_side(cfg, a.rows)
    labels = cfg.schemes or PRECOND_CONFIGURATIONS
    logger.info(f"system {a}, preconditioners {', '.join(labels)}")

    preconditioners: Dict[str, Any] = {}
    failures: Dict[str, str] = {}
    for label in labels:
        try:
            preconditioners[label] = _build_configuration(a, label, cfg.chop_threshold)
        except HyperInverseError as e:
            logger.error(f"preconditioner {label} failed: {e}")
            failures[label] = type(e).__name__

    instances = [(label, tol) for tol in cfg.tols for label in labels]

    def run(instance):
        label, tol = instance
        if label in failures:
            row = {"configuration": label, "tol": tol, "iterations": np.nan, "converged": False,
                   "true_residual": np.nan, "nnz": np.nan, "status": failures[label], "seconds": 0.0}
            return row, None
        m = preconditioners[label]
        started = time.perf_counter()
        settings = {"tol": tol, "preconditioner": m}
        if cfg.restart:
            settings["restart"] = cfg.restart
        report = gmres(a, b, GmresConfig(**settings))
        row = {
            "configuration": label,
            "tol": tol,
            "iterations": report.iterations,
            "converged": report.converged,
            "true_residual": report.final_residual,
            "nnz": m.nnz if m is not None else 0,
            "status": "converged" if report.converged else ("stagnated" if report.stagnated else "not-converged"),
            "seconds": time.perf_counter() - started,
        }
        curve = report.to_frame()
        curve.insert(0, "tol", tol)
        curve.insert(0, "configuration", label)
        return row, curve

    results = fan_out(run, instances, _threads(cfg))
    frame = pd.DataFrame([row for row, _ in results])
    curves = [curve for _, curve in results if curve is not None]
    curve_frame = pd.concat(curves, ignore_index=True) if curves else pd.DataFrame()

    _print_frame(f"GMRES on {a.rows}x{a.cols} system", frame, stream)
    _write_csv(frame.drop(columns=["seconds"]), cfg.out)
    if not curve_frame.empty:
        _write_csv(curve_frame, cfg.out, "_curves")
    return CommandResult(exit_code=0, frame=frame, payload={"curves": curve_frame})


# -- invert -------------------------------------------------------------------


def _default_epsilon(config: ScalarConfig) -> float:
    """Stop tolerance, also the default bound on the normalized residual checks."""
    return 10.0 ** -(config.digits // 3) if config.is_extended else 1e-8


def _stop_rule(cfg: ExperimentConfig, scheme: SchemeId, alpha: Any, epsilon: float, kind: NormKind) -> StopRule:
    name = cfg.stop.strip().lower()
    if name == "reliable":
        return StopRule.reliable(scheme.order, alpha, epsilon, kind, max_loops=cfg.max_loops)
    if name == "step":
        return StopRule.step(epsilon, kind, max_loops=cfg.max_loops)
    if name == "relative-step":
        return StopRule.step(epsilon, kind, max_loops=cfg.max_loops, relative=True)
    if name == "residual":
        return StopRule.residual(epsilon, kind, max_loops=cfg.max_loops)
    raise ConfigurationError(f"unknown stop rule {cfg.stop!r}; expected reliable, step, relative-step or residual")


def cmd_invert(cfg: ExperimentConfig, stream: TextIO = sys.stdout) -> CommandResult:
    """Invert a MatrixMarket matrix, write the result and print the report JSON."""
    if not cfg.matrix:
        raise ConfigurationError("invert needs --matrix <file.mtx>")
    a = read_dense(cfg.matrix, _scalar_config(cfg))
    config = a.config
    scheme = SchemeId.parse(cfg.scheme)
    strategy = parse_init_strategy(cfg.init or "pan-schreiber")
    kind = _parse_norm(cfg, NormKind.FROBENIUS)
    epsilon = cfg.epsilon or _default_epsilon(config)
    tolerance = cfg.check_tol or _default_epsilon(config)

    init = initialize(a, strategy)
    report = iterate(scheme, a, init.x0, _stop_rule(cfg, scheme, init.alpha, epsilon, kind))
    x = report.x
    scale = max(to_float(norm(x, NormKind.FROBENIUS)), 1.0)

    if init.index is not None:
        check = drazin_check(a, x, init.index, NormKind.FROBENIUS)
        checks = {name: value / scale for name, value in check.to_dict().items()}
        relevant = list(checks)
    else:
        residuals = outer_inverse_check(a, x, NormKind.FROBENIUS)
        checks = {name: value / scale for name, value in residuals.to_dict().items()}
        moore_penrose = strategy.kind in (InitKind.ADJOINT, InitKind.PAN_SCHREIBER) and strategy.g is None
        relevant = list(checks) if moore_penrose or a.is_square else ["outer"]
    passed = all(checks[name] <= tolerance for name in relevant)

    if cfg.out:
        write_dense(cfg.out, x, comment=f"{scheme.label} inverse, {report.loops} loops, init {strategy.name}")

    payload = report.to_dict()
    payload.update({
        "init": strategy.name,
        "alpha": to_float(init.alpha),
        "index": init.index,
        "precision": config.describe(),
        "checks": checks,
        "check_tolerance": tolerance,
        "checks_passed": passed,
        "output": cfg.out,
    })
    print(json.dumps(payload, indent=2), file=stream)
    ok = report.converged and passed
    if not ok:
        logger.error(f"invert did not pass: {report.terminated.value}, checks {'passed' if passed else 'failed'}")
    return CommandResult(exit_code=0 if ok else 1, payload=payload)
