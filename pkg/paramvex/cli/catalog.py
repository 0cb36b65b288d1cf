"""
paramvex catalog
"""
import argparse
from typing import IO

from paramvex.services.catalog import catalog


def cmd_catalog(args: argparse.Namespace, stdout: IO[str]) -> int:
    """
    List the catalog instances

    Returns:
        Exit code 0
    """
    for instance in catalog():
        program = instance.program
        stdout.write(
            f"{instance.id}\tn={program.n}\tm={program.m}\t"
            f"domain={instance.known_domain}\tpathology={instance.pathology}\n"
        )
    return 0
