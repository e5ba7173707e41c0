"""
Experiment Configuration for Hyperpower Inverse Toolkit
Per-run parameters, loaded from JSON or YAML and overridden by CLI flags
"""

import json
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.utils.errors import ConfigurationError

_SIZE_PATTERN = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")

DEFAULT_TOLS = [1e-2, 1e-4, 1e-6, 1e-8, 1e-10]
DEFAULT_EPSILONS = [1e-5, 1e-6, 1e-7]
DEFAULT_SIZES = ["100x90", "200x190", "300x290"]


class ExperimentConfig(BaseModel):
    """Everything a bench command reads; unset fields fall back to command defaults."""

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    schemes: Optional[List[str]] = Field(default=None, description="Scheme list (or NAME:loops for precond-bench)")
    scheme: str = Field(default="PM", description="Scheme for invert")
    init: Optional[str] = Field(default=None, description="Initialization strategy name")
    digits: Optional[int] = Field(default=None, description="Decimal digits; unset means machine double")
    epsilon: Optional[float] = Field(default=None, description="Stop tolerance")
    epsilons: List[float] = Field(default_factory=lambda: list(DEFAULT_EPSILONS))
    norm: Optional[str] = Field(default=None, description="Norm for stop rules and checks")
    stop: str = Field(default="relative-step", description="Stop rule for invert: reliable, step, relative-step, residual")
    sizes: List[str] = Field(default_factory=lambda: list(DEFAULT_SIZES), description="Hilbert sizes as MxN")
    tols: List[float] = Field(default_factory=lambda: list(DEFAULT_TOLS), description="GMRES tolerances")
    matrix: Optional[str] = Field(default=None, description="MatrixMarket input")
    rhs: Optional[str] = Field(default=None, description="MatrixMarket right-hand side, or \"random\"")
    out: Optional[str] = Field(default=None, description="Output path (CSV prefix or inverse file)")
    check_tol: Optional[float] = Field(default=None, description="Relative tolerance of defining-equation checks")
    perturb: Dict[str, float] = Field(default_factory=dict, description="Coefficient perturbations")
    grid: Optional[int] = Field(default=None, description="Grid side of the built-in shifted Laplacian")
    restart: Optional[int] = Field(default=None, description="GMRES restart length")
    chop_threshold: Optional[float] = Field(default=None, description="Preconditioner drop tolerance")
    max_loops: Optional[int] = Field(default=None, description="Iteration loop budget")
    seed: int = Field(default=0, description="Seed for random right-hand sides")
    threads: Optional[int] = Field(default=None, description="Worker threads")

    @field_validator("sizes")
    @classmethod
    def validate_sizes(cls, v):
        for text in v:
            match = _SIZE_PATTERN.match(text)
            if not match:
                raise ValueError(f"size {text!r} must look like 100x90")
            m, n = int(match.group(1)), int(match.group(2))
            if not m > n >= 1:
                raise ValueError(f"size {text!r} needs more rows than columns")
        return [text.strip().lower() for text in v]

    @field_validator("digits")
    @classmethod
    def validate_digits(cls, v):
        if v is not None and v < 1:
            raise ValueError("digits must be positive")
        return v

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v):
        if v is not None and v < 1:
            raise ValueError("threads must be at least 1")
        return v

    def parsed_sizes(self) -> List[Tuple[int, int]]:
        return [tuple(int(part) for part in text.split("x")) for text in self.sizes]

    def to_json(self) -> str:
        return json.dumps(self.model_dump(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            return cls.model_validate_json(text)
        except ValidationError as e:
            raise ConfigurationError(f"invalid experiment config: {e}")

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        """JSON by default; .yaml/.yml files go through PyYAML."""
        source = Path(path)
        try:
            text = source.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigurationError(f"cannot read config {path}: {e}")
        if source.suffix.lower() in (".yaml", ".yml"):
            try:
                data = yaml.safe_load(text) or {}
                return cls.model_validate(data)
            except (yaml.YAMLError, ValidationError) as e:
                raise ConfigurationError(f"invalid experiment config {path}: {e}")
        return cls.from_json(text)

    def merged(self, overrides: Dict[str, Any]) -> "ExperimentConfig":
        """Copy with every non-None override applied."""
        values = self.model_dump()
        values.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return ExperimentConfig.model_validate(values)
        except ValidationError as e:
            raise ConfigurationError(f"invalid option: {e}")
