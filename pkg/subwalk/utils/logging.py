"""
Logging utilities for subwalk.

Log records go to stderr and to optional rotating files, never to the data
files a command writes. Every record is stamped with the command and seed of
the run, and records emitted from Monte Carlo worker threads name the thread.
"""

import logging
import logging.handlers
import os
import sys
import threading
import time
from datetime import datetime
from typing import Any, Dict, Optional

RUN_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - [%(run)s] %(message)s"
SIMPLE_FORMAT = "%(message)s"


def _level(name: Any, default: int) -> int:
    level = getattr(logging, str(name).upper(), None)
    return level if isinstance(level, int) else default


class RunContextFilter(logging.Filter):
    """Adds ``record.run``: the command, the seed and, off the main thread, the worker."""

    def __init__(self, command: Optional[str] = None, seed: Optional[int] = None):
        """
        Initialize filter.

        Args:
            command: CLI command being run
            seed: Base seed of the run
        """
        super().__init__()
        parts = [command or "subwalk"]
        if seed is not None:
            parts.append(f"seed={seed}")
        self.context = " ".join(parts)

    def filter(self, record: logging.LogRecord) -> bool:
        """Stamp the record; never drops it."""
        thread = threading.current_thread()
        if thread is threading.main_thread():
            record.run = self.context
        else:
            record.run = f"{self.context} {thread.name}"
        return True


def setup_logging(config: Dict[str, Any], command: Optional[str] = None) -> logging.Logger:
    """
    Set up the root logger from the ``logging`` section.

    Args:
        config: Full configuration; the ``logging`` section and ``seed`` are read
        command: CLI command, used in the run stamp and the log file name

    Returns:
        Root logger
    """
    logging_config = config.get("logging", {})
    level = _level(logging_config.get("level", "INFO"), logging.INFO)
    context = RunContextFilter(command, config.get("seed"))

    logger = logging.getLogger()
    logger.setLevel(level)
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()

    console_config = logging_config.get("console", {})
    if console_config.get("enabled", True):
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(_level(console_config.get("level"), level))
        simple = console_config.get("simple", False)
        console_handler.setFormatter(logging.Formatter(SIMPLE_FORMAT if simple else RUN_FORMAT))
        console_handler.addFilter(context)
        logger.addHandler(console_handler)

    file_config = logging_config.get("file", {})
    if file_config.get("enabled", False):
        log_dir = file_config.get("directory", "logs")
        os.makedirs(log_dir, exist_ok=True)
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        stem = f"subwalk_{command}" if command else "subwalk"
        file_handler = logging.handlers.RotatingFileHandler(
            os.path.join(log_dir, f"{stem}_{timestamp}.log"),
            maxBytes=int(file_config.get("max_size", 10)) * 1024 * 1024,
            backupCount=int(file_config.get("backup_count", 5)),
            encoding="utf-8",
        )
        file_handler.setLevel(_level(file_config.get("level"), level))
        file_handler.setFormatter(logging.Formatter(RUN_FORMAT))
        file_handler.addFilter(context)
        logger.addHandler(file_handler)

    return logger


class ProgressLogger:
    """Logs percentage and throughput of long loops (trials, kernel families, criteria)."""

    def __init__(
        self,
        logger: logging.Logger,
        total: int,
        description: str = "Processing",
        log_interval: int = 10,
        unit: str = "items",
    ):
        """
        Initialize progress logger.

        Args:
            logger: Logger to use
            total: Total number of items
            description: Description of operation
            log_interval: Interval for logging progress (in percentage)
            unit: Name of the counted items
        """
        self.logger = logger
        self.total = total
        self.description = description
        self.log_interval = log_interval
        self.unit = unit
        self.current = 0
        self.last_logged_percentage = 0
        self.started = time.monotonic()

    @property
    def rate(self) -> float:
        """Items per second since the logger was created."""
        elapsed = time.monotonic() - self.started
        return self.current / elapsed if elapsed > 0 else 0.0

    def update(self, increment: int = 1):
        """
        Update progress.

        Args:
            increment: Number of items to increment by
        """
        self.current += increment
        percentage = int(self.current / self.total * 100) if self.total > 0 else 100

        if percentage >= self.last_logged_percentage + self.log_interval or percentage == 100:
            self.logger.info(
                f"{self.description}: {percentage}% ({self.current}/{self.total} {self.unit}, "
                f"{self.rate:.1f}/s)"
            )
            self.last_logged_percentage = percentage
