"""
Artifact writers: sweep CSV and analysis report JSON
"""
import csv
import logging
from pathlib import Path
from typing import IO, List, Optional, Union

from paramvex.schemas.report import AnalysisReport, ValueGrid

logger = logging.getLogger(__name__)


def sweep_header(m: int) -> List[str]:
    return [f"y_{i}" for i in range(1, m + 1)] + ["status", "value"]


def write_sweep_csv(grid: ValueGrid, stream: IO[str]) -> int:
    """
    Write a value grid as CSV

    Columns are y_1..y_m, status and value; the value cell is empty for
    infinite values. Floats use their shortest round-trip repr.

    Args:
        grid: Sampled value function
        stream: Text stream opened with newline=""

    Returns:
        Number of data rows written
    """
    m = len(grid.points[0]) if grid.points else 0
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(sweep_header(m))
    for point, value, status in zip(grid.points, grid.values, grid.statuses):
        cell = repr(value.value) if value.is_finite else ""
        writer.writerow([repr(float(c)) for c in point] + [status.value, cell])
    return len(grid.points)


def render_report(report: AnalysisReport) -> str:
    """Deterministic JSON rendering of a report"""
    return report.model_dump_json(indent=2) + "\n"


def write_text(content: str, path: Optional[Union[str, Path]], stdout: IO[str]) -> None:
    """Write to path, or to stdout when no path is given"""
    if path is None:
        stdout.write(content)
        return
    Path(path).write_text(content, encoding="utf-8")
    logger.info(f"Wrote {path}")
