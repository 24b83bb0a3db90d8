"""
Utilities for writing result files and hashing numeric content.
"""

import hashlib
import logging
from pathlib import Path
from typing import Iterable

import numpy as np
import pandas as pd


logger = logging.getLogger(__name__)


def ensure_directory(path: Path) -> Path:
    """Create a directory (and parents) if missing and return it."""
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_frame(frame: pd.DataFrame, path: Path) -> Path:
    """
    Write a table as CSV with a fixed, platform-independent layout.

    Args:
        frame: Table to write
        path: Target file

    Returns:
        Path of the written file
    """
    ensure_directory(path.parent)
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.debug(f"Wrote {len(frame)} rows to {path}")
    return path


def calculate_array_digest(arrays: Iterable[np.ndarray]) -> str:
    """
    Calculate SHA-256 over the raw bytes of a sequence of arrays.

    Dtype and shape are hashed too, so equal digests mean bit-identical content.

    Args:
        arrays: Arrays in a fixed order

    Returns:
        Hexadecimal SHA-256 hash string (64 characters)
    """
    digest = hashlib.sha256()
    for array in arrays:
        contiguous = np.ascontiguousarray(array)
        digest.update(str(contiguous.dtype).encode("utf-8"))
        digest.update(str(contiguous.shape).encode("utf-8"))
        digest.update(contiguous.tobytes())
    return digest.hexdigest()


def calculate_file_digest(path: Path) -> str:
    """SHA-256 of a file's bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
