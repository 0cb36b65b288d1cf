"""
paramvex check
"""
import argparse
import logging
from typing import IO

from paramvex.cli.common import resolve_plan
from paramvex.schemas.report import Verdict
from paramvex.services.analysis import run_checks
from paramvex.services.reporting import render_report, write_text

logger = logging.getLogger(__name__)


def cmd_check(args: argparse.Namespace, stdout: IO[str]) -> int:
    """
    Run the scenario checks and write the analysis report

    Returns:
        0 if every verdict is a pass or the declared one, 1 otherwise
    """
    plan = resolve_plan(args)
    report = run_checks(plan)
    write_text(render_report(report), args.out or plan.report_path, stdout)

    for check in report.checks:
        if check.verdict is not Verdict.PASS and check.expected is not True:
            logger.error(f"{check.name} on {report.instance}: {check.verdict.value}")
    return 0 if report.succeeded else 1
