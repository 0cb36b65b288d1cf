"""
paramvex sweep
"""
import argparse
import io
import logging
from typing import IO

from paramvex.cli.common import resolve_plan
from paramvex.services.analysis import run_sweep
from paramvex.services.reporting import write_sweep_csv, write_text

logger = logging.getLogger(__name__)


def cmd_sweep(args: argparse.Namespace, stdout: IO[str]) -> int:
    """
    Sample v on the scenario grid and write it as CSV

    Returns:
        Exit code 0; configuration errors propagate to the entry point
    """
    plan = resolve_plan(args)
    grid = run_sweep(plan)

    buffer = io.StringIO()
    rows = write_sweep_csv(grid, buffer)
    write_text(buffer.getvalue(), args.out or plan.csv_path, stdout)
    logger.info(f"Sweep of {plan.name} wrote {rows} rows")
    return 0
