"""
Command-line entry point
"""
import argparse
import logging
import sys
from typing import IO, Any, List, Optional

from pydantic import ValidationError

from paramvex.cli.catalog import cmd_catalog
from paramvex.cli.check import cmd_check
from paramvex.cli.common import add_program_arguments
from paramvex.cli.sweep import cmd_sweep
from paramvex.core.config import settings
from paramvex.core.exceptions import (
    DimensionLimitError,
    DimensionMismatchError,
    InvalidProgramError,
    ParamvexError,
    ScenarioError,
)
from paramvex.core.log import configure_logging
from paramvex.schemas.numeric import TOLERANCE_PROFILES

logger = logging.getLogger(__name__)

# Exit code for configuration, IO and solver errors
EXIT_CONFIG_ERROR = 2


def _add_shared_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # sub-command copies default to SUPPRESS and keep values set before the sub-command
    def default(value: Any) -> Any:
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--seed", type=int, default=default(0), help="Sampling seed (default 0)")
    parser.add_argument(
        "--tol",
        default=default("default"),
        choices=sorted(TOLERANCE_PROFILES),
        help="Tolerance profile",
    )
    parser.add_argument(
        "--log-level",
        default=default(None),
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Overrides PARAMVEX_LOG_LEVEL",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.PROJECT_NAME,
        description="Evaluate and certify value functions of parametric convex programs",
    )
    _add_shared_options(parser, suppress=False)

    commands = parser.add_subparsers(dest="command", required=True)

    catalog_parser = commands.add_parser("catalog", help="List the built-in programs")
    _add_shared_options(catalog_parser, suppress=True)
    catalog_parser.set_defaults(handler=cmd_catalog)

    sweep_parser = commands.add_parser("sweep", help="Sample v on a grid and write CSV")
    _add_shared_options(sweep_parser, suppress=True)
    add_program_arguments(sweep_parser)
    sweep_parser.set_defaults(handler=cmd_sweep)

    check_parser = commands.add_parser("check", help="Run the certifiers and write a JSON report")
    _add_shared_options(check_parser, suppress=True)
    add_program_arguments(check_parser)
    check_parser.set_defaults(handler=cmd_check)
    return parser


def main(argv: Optional[List[str]] = None, stdout: Optional[IO[str]] = None) -> int:
    """
    Run one command

    Args:
        argv: Arguments without the program name; sys.argv when omitted
        stdout: Stream for listings and artifacts without an output path

    Returns:
        0 on success, 1 when a check fails, 2 on configuration, IO or solver errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(args.log_level)
    try:
        return args.handler(args, stdout or sys.stdout)
    except (
        ScenarioError,
        InvalidProgramError,
        DimensionLimitError,
        DimensionMismatchError,
        ValidationError,
        OSError,
    ) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except ParamvexError as e:
        logger.error(f"{args.command} aborted: {type(e).__name__}: {e}")
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


def run() -> None:
    """Console script"""
    sys.exit(main())


if __name__ == "__main__":
    run()
