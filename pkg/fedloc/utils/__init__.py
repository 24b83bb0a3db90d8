from .file_utils import (
    calculate_array_digest,
    calculate_file_digest,
    ensure_directory,
    write_frame,
)
from .logging_utils import LogContext, setup_logging, verbosity_to_level

__all__ = [
    "LogContext",
    "calculate_array_digest",
    "calculate_file_digest",
    "ensure_directory",
    "setup_logging",
    "verbosity_to_level",
    "write_frame",
]
