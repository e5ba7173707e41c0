"""
Simple Configuration Management for Hyperpower Inverse Toolkit
Environment-driven settings - every knob has a default
"""

import os
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class LoggingConfig(BaseSettings):
    """Logging configuration."""

    log_level: str = Field(default="WARNING", description="Logging level")
    log_file: Optional[str] = Field(default=None, description="Log file path; no file sink when unset")
    log_rotation: str = Field(default="1 day", description="Log rotation interval")
    log_retention: str = Field(default="7 days", description="Log retention period")

    model_config = SettingsConfigDict(env_prefix="LOG_", case_sensitive=False)


class PrecisionConfig(BaseSettings):
    """Working-precision configuration."""

    extended_digits: int = Field(default=170, description="Decimal digits for the 150-digit experiment (with guard digits)")
    oracle_digits: int = Field(default=60, description="Decimal digits used by extended-precision oracles")
    power_tolerance: float = Field(default=1e-8, description="Relative tolerance of the spectral-norm power iteration")
    power_max_sweeps: int = Field(default=500, description="Sweep budget of the spectral-norm power iteration")

    model_config = SettingsConfigDict(env_prefix="HYPERINV_PRECISION_", case_sensitive=False)


class IterationConfig(BaseSettings):
    """Iteration driver configuration."""

    max_loops: int = Field(default=100, description="Maximum number of iteration loops")
    divergence_factor: float = Field(default=1e3, description="Step-norm growth over its running minimum that counts as divergence")
    divergence_window: int = Field(default=3, description="Consecutive loops of growth before divergence is declared")
    divergence_arm_threshold: float = Field(default=1e-6, description="Relative step below which the divergence detector is armed")
    track_residual: bool = Field(default=False, description="Record ||I - AX_k|| each loop (one extra product)")

    model_config = SettingsConfigDict(env_prefix="HYPERINV_ITERATION_", case_sensitive=False)


class KrylovConfig(BaseSettings):
    """GMRES and preconditioner configuration."""

    restart: int = Field(default=50, description="GMRES restart length")
    max_iters: int = Field(default=2000, description="Total Arnoldi step budget")
    chop_threshold: float = Field(default=1e-5, description="Drop tolerance applied after each preconditioner loop")
    stagnation_tolerance: float = Field(default=1e-14, description="Minimum relative improvement over a restart cycle")
    grid_size: int = Field(default=29, description="Grid side of the built-in shifted Laplacian")

    model_config = SettingsConfigDict(env_prefix="HYPERINV_KRYLOV_", case_sensitive=False)


class Config(BaseSettings):
    """Main application configuration."""

    # Environment
    environment: str = Field(default="development", description="Application environment")
    threads: int = Field(default=max(1, min(4, os.cpu_count() or 1)), description="Worker threads for benchmark fan-out")
    output_dir: str = Field(default="./results", description="Default directory for tables and reports")

    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    precision: PrecisionConfig = Field(default_factory=PrecisionConfig)
    iteration: IterationConfig = Field(default_factory=IterationConfig)
    krylov: KrylovConfig = Field(default_factory=KrylovConfig)

    model_config = SettingsConfigDict(
        env_prefix="HYPERINV_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        validate_assignment=True,
        extra="ignore",
    )

    @field_validator("environment")
    @classmethod
    def validate_environment(cls, v):
        """Validate environment setting."""
        if v not in ["development", "production", "testing"]:
            raise ValueError("Environment must be development, production, or testing")
        return v

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v):
        """At least one worker."""
        return max(1, int(v))


# Global configuration instance
_config: Optional[Config] = None


def get_config() -> Config:
    """Get global configuration instance."""
    global _config
    if _config is None:
        _config = Config()
    return _config


def reset_config():
    """Drop the cached instance so the next call re-reads the environment."""
    global _config
    _config = None


def get_logging_config() -> LoggingConfig:
    """Get logging configuration."""
    return get_config().logging


def get_precision_config() -> PrecisionConfig:
    """Get precision configuration."""
    return get_config().precision


def get_iteration_config() -> IterationConfig:
    """Get iteration configuration."""
    return get_config().iteration


def get_krylov_config() -> KrylovConfig:
    """Get Krylov configuration."""
    return get_config().krylov
