"""
Logging configuration for the CLI and maintenance scripts
"""
import logging
import sys
from pathlib import Path
from typing import List, Optional, TextIO

from chunklist.core.config import settings

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_logging(level: Optional[str] = None, stream: Optional[TextIO] = None) -> logging.Logger:
    """
    Setup logging with console and (optionally) file handlers

    Args:
        level: Override for settings.log_level
        stream: Console stream (stdout by default)

    Returns:
        Logger for this module
    """
    handlers: List[logging.Handler] = [logging.StreamHandler(stream or sys.stdout)]

    if settings.log_dir:
        log_dir = Path(settings.log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_dir / "chunklist.log"))

    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper()),
        format=LOG_FORMAT,
        datefmt=DATE_FORMAT,
        handlers=handlers,
        force=True,
    )

    # Set specific loggers to reduce noise
    logging.getLogger("logfire").setLevel(logging.WARNING)
    logging.getLogger("urllib3").setLevel(logging.WARNING)

    logger = logging.getLogger(__name__)
    logger.info("Logging configured successfully")

    return logger
