"""
Iteration Driver for Hyperpower Inverse Toolkit
Runs a scheme until a stop rule fires, recording per-loop history
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

from src.iteration.coefficients import PmCoefficients
from src.iteration.diagnostics import coc_estimate
from src.iteration.schemes import SchemeId, residual, scheme_step
from src.linalg.dense import DenseMatrix, MatmulCounter
from src.linalg.norms import NormKind, norm
from src.linalg.scalar import to_float
from src.utils.config_simple import get_iteration_config
from src.utils.errors import ConfigurationError, ConvergenceDiagnosticError, DivergenceError
from src.utils.logging_setup import get_logger

logger = get_logger(__name__)


class StopKind(str, Enum):
    RELIABLE = "reliable"
    RESIDUAL = "residual"
    STEP = "step"


class Termination(str, Enum):
    CONVERGED = "converged"
    LOOP_BUDGET = "loop-budget"
    DIVERGENCE = "divergence-detected"


@dataclass(frozen=True)
class StopRule:
    """When to stop iterating.

    reliable: ||X_{k+1}-X_k|| / (p^k alpha) < epsilon
    residual: ||I - A X_{k+1}|| < epsilon (one product per loop outside the scheme)
    step:     ||X_{k+1}-X_k|| < epsilon

    With relative=True the step norm is divided by ||X_{k+1}|| first.
    """
    kind: StopKind
    epsilon: float
    norm: NormKind = NormKind.FROBENIUS
    p: Optional[int] = None
    alpha: Optional[Any] = None
    max_loops: Optional[int] = None
    relative: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", StopKind(self.kind))
        object.__setattr__(self, "norm", NormKind(self.norm))
        if self.epsilon <= 0:
            raise ConfigurationError(f"stop tolerance must be positive, got {self.epsilon}")
        if self.kind is StopKind.RELIABLE:
            if self.p is None or self.p < 2:
                raise ConfigurationError("the reliable rule needs the scheme order p >= 2")
            if self.alpha is None or not self.alpha > 0:
                raise ConfigurationError("the reliable rule needs a positive alpha from the initialization")
        if self.max_loops is None:
            object.__setattr__(self, "max_loops", get_iteration_config().max_loops)
        elif self.max_loops < 1:
            raise ConfigurationError(f"max_loops must be positive, got {self.max_loops}")

    @classmethod
    def reliable(cls, p: int, alpha: Any, epsilon: float, norm: NormKind = NormKind.FROBENIUS,
                 max_loops: Optional[int] = None) -> "StopRule":
        return cls(StopKind.RELIABLE, epsilon, norm, p=p, alpha=alpha, max_loops=max_loops)

    @classmethod
    def residual(cls, epsilon: float, norm: NormKind = NormKind.FROBENIUS,
                 max_loops: Optional[int] = None) -> "StopRule":
        return cls(StopKind.RESIDUAL, epsilon, norm, max_loops=max_loops)

    @classmethod
    def step(cls, epsilon: float, norm: NormKind = NormKind.FROBENIUS,
             max_loops: Optional[int] = None, relative: bool = False) -> "StopRule":
        return cls(StopKind.STEP, epsilon, norm, max_loops=max_loops, relative=relative)


@dataclass
class IterationRecord:
    """One loop: X_k -> X_{k+1}."""
    loop: int
    step_norm: Any
    matmul_count: int
    residual_norm: Optional[Any] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "loop": self.loop,
            "step_norm": to_float(self.step_norm),
            "residual_norm": None if self.residual_norm is None else to_float(self.residual_norm),
            "matmul_count": self.matmul_count,
        }


@dataclass
class IterationReport:
    """Outcome of iterate(): history, final iterate and termination reason."""
    scheme: SchemeId
    terminated: Termination
    x: DenseMatrix
    records: List[IterationRecord] = field(default_factory=list)
    coc: Optional[float] = None
    alpha: Optional[Any] = None
    best_loop: Optional[int] = None

    @property
    def loops(self) -> int:
        return len(self.records)

    @property
    def converged(self) -> bool:
        return self.terminated is Termination.CONVERGED

    @property
    def step_norms(self) -> List[Any]:
        return [record.step_norm for record in self.records]

    @property
    def final_step_norm(self) -> Optional[Any]:
        return self.records[-1].step_norm if self.records else None

    @property
    def matmuls_per_loop(self) -> int:
        return self.records[-1].matmul_count if self.records else 0

    @property
    def total_matmuls(self) -> int:
        return sum(record.matmul_count for record in self.records)

    def to_dict(self) -> Dict[str, Any]:
        final = self.final_step_norm
        return {
            "scheme": self.scheme.label,
            "order": self.scheme.order,
            "loops": self.loops,
            "terminated": self.terminated.value,
            "coc": self.coc,
            "matmuls_per_loop": self.matmuls_per_loop,
            "total_matmuls": self.total_matmuls,
            "final_step_norm": None if final is None else to_float(final),
            "best_loop": self.best_loop,
            "history": [record.to_dict() for record in self.records],
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


class _DivergenceWatch:
    """Step-norm growth detector.

    Armed once the relative step gets small; from then on `window` loops with
    the step at least `factor` times its running minimum mean divergence.
    Before arming, a run of `window` rising steps that has climbed `factor`
    over the smallest step so far counts only if ||I - AX|| is at least one
    and at least doubled since the previous such check.
    """

    def __init__(self, factor: float, window: int, arm_threshold: float):
        self.factor = factor
        self.window = window
        self.arm_threshold = arm_threshold
        self.armed = False
        self.running_min = None
        self.growth = 0
        self.previous = None
        self.rising = 0
        self.last_residual = None

    def update(self, step: Any, relative_step: Any,
               residual_norm: Optional[Callable[[], Any]] = None) -> bool:
        if not self.armed:
            if relative_step < self.arm_threshold:
                self.armed = True
                self.running_min = step
                return False
            return self._unarmed(step, residual_norm)
        if step >= self.factor * self.running_min:
            self.growth += 1
        else:
            self.growth = 0
        if step < self.running_min:
            self.running_min = step
        return self.growth >= self.window

    def _unarmed(self, step: Any, residual_norm: Optional[Callable[[], Any]]) -> bool:
        self.rising = self.rising + 1 if self.previous is not None and step > self.previous else 0
        self.previous = step
        self.running_min = step if self.running_min is None or step < self.running_min else self.running_min
        if self.rising < self.window or step < self.factor * self.running_min or residual_norm is None:
            self.last_residual = None
            return False
        current = residual_norm()
        grew = self.last_residual is not None and current >= 2 * self.last_residual
        self.last_residual = current
        return grew and current >= 1


def _reliable_denominator(stop: StopRule, k: int, config):
    """p^k alpha at the working precision, None once it leaves the exponent range."""
    try:
        value = config.real(stop.p) ** k * config.real(stop.alpha)
    except OverflowError:
        return None
    if to_float(value) == float("inf") and not config.is_extended:
        return None
    return value


def iterate(scheme: SchemeId, a: DenseMatrix, x0: DenseMatrix, stop: StopRule,
            coefficients: Optional[PmCoefficients] = None,
            track_residual: Optional[bool] = None) -> IterationReport:
    """Repeat scheme_step from x0 until the stop rule or the loop budget ends the run.

    A non-finite iterate raises DivergenceError carrying the partial report;
    sustained step-norm growth ends the run with terminated=divergence-detected.
    Either way the report keeps the iterate with the smallest step so far.
    """
    settings = get_iteration_config()
    track = settings.track_residual if track_residual is None else track_residual
    track = track or stop.kind is StopKind.RESIDUAL
    watch = _DivergenceWatch(settings.divergence_factor, settings.divergence_window,
                             settings.divergence_arm_threshold)
    config = a.config
    epsilon = config.real(stop.epsilon)
    reliable_fallback = False

    report = IterationReport(scheme=scheme, terminated=Termination.LOOP_BUDGET, x=x0, alpha=stop.alpha)
    x = x0
    best_x, best_step = x0, None
    logger.debug(f"iterating {scheme.label} on {a.rows}x{a.cols} ({config.describe()}), "
                 f"{stop.kind.value} rule eps={stop.epsilon:g}, budget {stop.max_loops}")

    for k in range(stop.max_loops):
        counter = MatmulCounter()
        try:
            x_next = scheme_step(scheme, a, x, counter=counter, coefficients=coefficients)
        except DivergenceError as e:
            report.x = best_x
            report.terminated = Termination.DIVERGENCE
            _finish(report)
            logger.error(f"{scheme.label} diverged at loop {k + 1}: {e}")
            raise DivergenceError(str(e), report=report, partial=x) from e

        step = norm(x_next - x, stop.norm)
        x_norm = norm(x_next, stop.norm)
        relative_step = step / x_norm if x_norm > 0 else step
        record = IterationRecord(loop=k + 1, step_norm=step, matmul_count=counter.count)
        if track:
            record.residual_norm = norm(residual(a, x_next), stop.norm)
        report.records.append(record)
        x = x_next
        report.x = x
        if best_step is None or step < best_step:
            best_x, best_step, report.best_loop = x, step, k + 1

        measure = relative_step if stop.relative else step
        if stop.kind is StopKind.RESIDUAL:
            done = record.residual_norm < epsilon
        elif stop.kind is StopKind.RELIABLE and not reliable_fallback:
            denominator = _reliable_denominator(stop, k, config)
            if denominator is None:
                reliable_fallback = True
                logger.warning(f"reliable rule denominator {stop.p}^{k} * alpha overflowed; "
                               f"falling back to the step rule")
                done = measure < epsilon
            else:
                done = measure / denominator < epsilon
        else:
            done = measure < epsilon
        logger.debug(f"{scheme.label} loop {k + 1}: step {to_float(step):.3e}, {counter.count} products")

        if done:
            report.terminated = Termination.CONVERGED
            break

        def current_residual():
            if record.residual_norm is None:
                record.residual_norm = norm(residual(a, x), stop.norm)
            return record.residual_norm

        if watch.update(step, relative_step, current_residual):
            report.terminated = Termination.DIVERGENCE
            report.x = best_x
            logger.warning(f"{scheme.label}: step norm grew {settings.divergence_factor:g}x over its minimum "
                           f"for {settings.divergence_window} loops; stopping at loop {k + 1}, "
                           f"keeping the iterate of loop {report.best_loop}")
            break

    _finish(report)
    logger.info(f"{scheme.label} finished: {report.terminated.value} after {report.loops} loops, "
                f"final step {to_float(report.final_step_norm or 0):.3e}")
    return report


def _finish(report: IterationReport):
    try:
        report.coc = coc_estimate(report.step_norms)
    except ConvergenceDiagnosticError:
        report.coc = None
