"""
Logging setup for the command line
"""
import logging
import sys
from typing import Optional

from paramvex.core.config import settings

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """
    Send log records to stderr so stdout carries only CSV, JSON or listings

    Args:
        level: Level name; PARAMVEX_LOG_LEVEL when omitted
    """
    level = level or settings.PARAMVEX_LOG_LEVEL
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level)
