"""
Logging setup shared by the command line and long-running sweeps.
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path

from .config import LoggingConfig


def setup_logging(config: LoggingConfig = None) -> logging.Logger:
    """
    Configure the root logger from a LoggingConfig.

    Existing handlers are replaced so repeated calls (tests, several CLI
    invocations in one process) do not duplicate output.
    """
    config = config or LoggingConfig()
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(config.format)
    if config.enable_console:
        console = logging.StreamHandler(sys.stderr)
        console.setFormatter(formatter)
        root.addHandler(console)

    if config.enable_file and config.file_path:
        Path(config.file_path).parent.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            config.file_path,
            maxBytes=config.max_file_size,
            backupCount=config.backup_count,
            encoding="utf-8",
        )
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)

    root.setLevel(getattr(logging, config.level.upper(), logging.INFO))
    return root
