"""
Model checkpoints.

Container: an uncompressed NumPy ``.npz`` archive holding

- ``architecture``: int64 layer widths
- ``vector``: float64 flattened parameters (see ``flatten`` for the ordering)
- ``seed``: int64 initialization seed, -1 when unknown
- ``tag``: free-form label such as ``FEDAMP/client-3``

Arrays are stored as raw little-endian copies, so loading returns the exact bits
that were saved. The archive's zip metadata carries timestamps; compare
checkpoints with :func:`checkpoint_digest`, not file hashes.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ..exceptions import ContractViolationError
from ..utils.file_utils import calculate_array_digest, ensure_directory
from .mlp import MlpParams, flatten, unflatten


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Checkpoint:
    """Parameters plus provenance."""

    params: MlpParams
    seed: Optional[int] = None
    tag: str = ""


def checkpoint_digest(params: MlpParams) -> str:
    """SHA-256 over architecture and flattened parameters."""
    return calculate_array_digest(
        [np.asarray(params.architecture, dtype=np.int64), flatten(params)]
    )


def save_checkpoint(
    path: Path, params: MlpParams, seed: Optional[int] = None, tag: str = ""
) -> Path:
    """
    Write a checkpoint archive.

    Args:
        path: Target ``.npz`` file
        params: Parameters to store
        seed: Initialization seed for provenance
        tag: Free-form label

    Returns:
        Path of the written file
    """
    path = Path(path)
    ensure_directory(path.parent)
    with open(path, "wb") as f:
        np.savez(
            f,
            architecture=np.asarray(params.architecture, dtype="<i8"),
            vector=flatten(params).astype("<f8"),
            seed=np.asarray(-1 if seed is None else seed, dtype="<i8"),
            tag=np.asarray(tag),
        )
    logger.debug(f"Saved checkpoint {tag or path.name} to {path}")
    return path


def load_checkpoint(path: Path) -> Checkpoint:
    """Read a checkpoint written by :func:`save_checkpoint`."""
    with np.load(Path(path), allow_pickle=False) as archive:
        missing = {"architecture", "vector", "seed", "tag"} - set(archive.files)
        if missing:
            raise ContractViolationError(
                f"Checkpoint {path} lacks arrays: {sorted(missing)}"
            )
        architecture = [int(width) for width in archive["architecture"]]
        params = unflatten(archive["vector"].astype(np.float64), architecture)
        seed = int(archive["seed"])
        tag = str(archive["tag"])
    return Checkpoint(params=params, seed=None if seed < 0 else seed, tag=tag)
