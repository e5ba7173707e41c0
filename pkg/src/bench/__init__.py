"""
Benchmark drivers and command line
"""

from src.bench.cli import main
from src.bench.commands import CommandResult
from src.bench.config import ExperimentConfig

__all__ = ["CommandResult", "ExperimentConfig", "main"]
