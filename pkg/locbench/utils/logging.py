"""Logging utilities for the localisation workbench."""

import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Union


def setup_logging(log_dir: Union[str, Path] = "results/logs", level: str = "INFO") -> logging.Logger:
    """Setup logging configuration.

    Log records go to stderr and to a timestamped file; stdout is left to
    the JSON report.

    Args:
        log_dir: Directory for log files
        level: Logging level name

    Returns:
        Logger instance configured for the workbench
    """
    log_dir = Path(log_dir)
    log_dir.mkdir(parents=True, exist_ok=True)

    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format="%(asctime)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(sys.stderr),
            logging.FileHandler(
                log_dir / f'workbench_{datetime.now().strftime("%Y%m%d_%H%M%S")}.log'
            ),
        ],
    )
    return logging.getLogger("locbench")
