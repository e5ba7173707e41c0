"""
Command Line for Hyperpower Inverse Toolkit
verify-coeffs, drazin-table, hilbert-bench, precond-bench and invert
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from src.bench.commands import (
    CommandResult,
    cmd_drazin_table,
    cmd_hilbert_bench,
    cmd_invert,
    cmd_precond_bench,
    cmd_verify_coeffs,
)
from src.bench.config import ExperimentConfig
from src.utils.config_simple import get_logging_config
from src.utils.errors import ConfigurationError, HyperInverseError
from src.utils.logging_setup import get_logger, setup_logging

logger = get_logger(__name__)

COMMANDS = {
    "verify-coeffs": cmd_verify_coeffs,
    "drazin-table": cmd_drazin_table,
    "hilbert-bench": cmd_hilbert_bench,
    "precond-bench": cmd_precond_bench,
    "invert": cmd_invert,
}

EXIT_ERROR = 2


def _csv_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in _csv_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _perturbation(text: str):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"perturbation must look like name=value, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"perturbation value {value!r} is not a number")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON or YAML experiment config; flags override it")
    common.add_argument("--seed", type=int, help="Seed for random right-hand sides")
    common.add_argument("--out", help="Output path (CSV prefix, or inverse file for invert)")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--log-file", default=None, help="Also log to this rotating file")
    common.add_argument("--threads", type=int, help="Worker threads for independent runs")
    common.add_argument("--digits", type=int, help="Decimal digits of extended precision")
    common.add_argument("--norm", help="one, infinity, frobenius or spectral-estimate")
    common.add_argument("--max-loops", dest="max_loops", type=int, help="Iteration loop budget")

    parser = argparse.ArgumentParser(
        prog="hyperinv",
        description="Hyperpower iterations for generalized inverses",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify-coeffs", parents=[common], help="Check the PM coefficients")
    verify.add_argument("--perturb", type=_perturbation, action="append", default=None,
                        metavar="NAME=DELTA", help="Shift a coefficient before checking")

    drazin = sub.add_parser("drazin-table", parents=[common], help="Schemes on the index-3 test matrix")
    drazin.add_argument("--schemes", type=_csv_list)
    drazin.add_argument("--eps", dest="epsilon", type=float)

    hilbert = sub.add_parser("hilbert-bench", parents=[common], help="Moore-Penrose inverses of Hilbert matrices")
    hilbert.add_argument("--schemes", type=_csv_list)
    hilbert.add_argument("--sizes", type=_csv_list, help="e.g. 100x90,200x190")
    hilbert.add_argument("--epsilons", type=_float_list)
    hilbert.add_argument("--init")

    precond = sub.add_parser("precond-bench", parents=[common], help="GMRES with approximate inverses")
    precond.add_argument("--matrix", help="MatrixMarket system matrix; default is the built-in shifted Laplacian")
    precond.add_argument("--rhs", help="MatrixMarket right-hand side, or \"random\" drawn from --seed; "
                                       "default is all ones")
    precond.add_argument("--schemes", type=_csv_list, help="none, jacobi or NAME:loops entries")
    precond.add_argument("--tols", type=_float_list)
    precond.add_argument("--grid", type=int)
    precond.add_argument("--restart", type=int)
    precond.add_argument("--chop", dest="chop_threshold", type=float)

    invert = sub.add_parser("invert", parents=[common], help="Invert one MatrixMarket matrix")
    invert.add_argument("--matrix", required=True)
    invert.add_argument("--scheme")
    invert.add_argument("--init")
    invert.add_argument("--eps", dest="epsilon", type=float)
    invert.add_argument("--stop", help="reliable, step, relative-step or residual")
    invert.add_argument("--check-tol", dest="check_tol", type=float)

    return parser


_NOT_EXPERIMENT = {"command", "config", "log_level", "log_file"}


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Config file (if any) with command-line flags layered on top."""
    base = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    overrides: Dict[str, Any] = {key: value for key, value in vars(args).items() if key not in _NOT_EXPERIMENT}
    if overrides.get("perturb") is not None:
        overrides["perturb"] = dict(overrides["perturb"])
    return base.merged(overrides)


def _error_payload(command: Optional[str], error: Exception) -> str:
    payload = error.to_dict() if isinstance(error, HyperInverseError) else {"error": type(error).__name__,
                                                                            "message": str(error)}
    payload["command"] = command
    return json.dumps(payload, indent=2, default=str)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    settings = get_logging_config()
    setup_logging(
        level=args.log_level or settings.log_level,
        log_file=args.log_file or settings.log_file,
        rotation=settings.log_rotation,
        retention=settings.log_retention,
    )

    try:
        cfg = resolve_config(args)
        logger.debug(f"{args.command} with {cfg.to_json()}")
        result: CommandResult = COMMANDS[args.command](cfg, sys.stdout)
    except HyperInverseError as e:
        logger.error(f"{args.command} failed: {e}")
        print(_error_payload(args.command, e), file=sys.stdout)
        return EXIT_ERROR
    except ValueError as e:
        logger.error(f"{args.command} rejected its input: {e}")
        print(_error_payload(args.command, ConfigurationError(str(e))), file=sys.stdout)
        return EXIT_ERROR
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
