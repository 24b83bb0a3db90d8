"""
Utility functions for logging configuration across all commands.
"""

import logging
import time
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional


def setup_logging(
    service_name: str,
    log_file: str,
    log_level: str = "INFO",
    log_dir: str = "logs",
    max_bytes: int = 10 * 1024 * 1024,  # 10MB
    backup_count: int = 3,
    use_rotation: bool = True,
) -> logging.Logger:
    """
    Configure logging with both console and file handlers.

    Args:
        service_name: Name of the logger to return
        log_file: Name of the log file
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_dir: Directory for log files
        max_bytes: Maximum size of log file before rotation (default 10MB)
        backup_count: Number of backup files to keep (default 3)
        use_rotation: Whether to use rotating file handler (default True)

    Returns:
        Configured logger instance
    """
    log_path = Path(log_dir)
    log_path.mkdir(parents=True, exist_ok=True)

    handlers: list[logging.Handler] = [logging.StreamHandler()]

    log_file_path = log_path / log_file
    if use_rotation:
        file_handler: logging.Handler = RotatingFileHandler(
            log_file_path,
            maxBytes=max_bytes,
            backupCount=backup_count,
            encoding="utf-8",
        )
    else:
        file_handler = logging.FileHandler(log_file_path, encoding="utf-8")
    handlers.append(file_handler)

    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,  # Force reconfiguration if already configured
    )

    logger = logging.getLogger(service_name)
    logger.debug(f"Logging initialized for {service_name} at level {log_level}")
    logger.debug(f"Log file: {log_file_path}")
    return logger


def verbosity_to_level(base_level: str, verbosity: int) -> str:
    """Lower the configured level by one step per -v flag."""
    levels = ["ERROR", "WARNING", "INFO", "DEBUG"]
    base = base_level.upper()
    index = levels.index(base) if base in levels else 2
    return levels[min(index + verbosity, len(levels) - 1)]


class LogContext:
    """Context manager for timing operations."""

    def __init__(
        self,
        logger: logging.Logger,
        operation: str,
        log_level: str = "INFO",
        slow_after: float = 60.0,
    ):
        self.logger = logger
        self.operation = operation
        self.log_level = getattr(logging, log_level.upper())
        self.slow_after = slow_after
        self.start_time: Optional[float] = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        self.logger.log(self.log_level, f"Starting {self.operation}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        duration = time.perf_counter() - self.start_time if self.start_time else 0.0

        if exc_type:
            self.logger.error(f"{self.operation} failed after {duration:.2f}s: {exc_val}")
        elif duration > self.slow_after:
            self.logger.warning(f"{self.operation} completed in {duration:.2f}s (slow)")
        else:
            self.logger.log(self.log_level, f"{self.operation} completed in {duration:.2f}s")
