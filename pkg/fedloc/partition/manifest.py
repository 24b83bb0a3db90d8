"""
Partition manifest: one CSV row per assigned sample.
"""

import logging
from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from ..data.preprocessing import AreaDataset
from ..exceptions import ContractViolationError, SchemaError
from ..utils.file_utils import write_frame
from .dirichlet import ClientLabelDistribution


logger = logging.getLogger(__name__)

MANIFEST_COLUMNS = ["client_id", "sample_index", "label"]


def manifest_frame(clients: List[AreaDataset]) -> pd.DataFrame:
    """Rows (client_id, sample_index, label); sample_index is the global row id."""
    return pd.DataFrame(
        {
            "client_id": np.concatenate(
                [np.full(client.size, i, dtype=np.int64) for i, client in enumerate(clients)]
            ),
            "sample_index": np.concatenate([client.index for client in clients]),
            "label": np.concatenate([client.labels for client in clients]),
        },
        columns=MANIFEST_COLUMNS,
    )


def export_manifest(clients: List[AreaDataset], path: Path) -> Path:
    path = write_frame(manifest_frame(clients), Path(path))
    logger.info(f"Wrote partition manifest for {len(clients)} clients to {path}")
    return path


def load_manifest(path: Path, dataset: AreaDataset) -> List[AreaDataset]:
    """
    Rebuild client datasets from a manifest and the dataset it was cut from.

    Raises:
        SchemaError: Manifest columns missing
        ContractViolationError: Indices or labels do not match ``dataset``
    """
    frame = pd.read_csv(Path(path))
    missing = [column for column in MANIFEST_COLUMNS if column not in frame.columns]
    if missing:
        raise SchemaError(f"Manifest {path} is missing: {', '.join(missing)}", missing=missing)

    position_of = {int(global_id): pos for pos, global_id in enumerate(dataset.index)}
    clients = []
    for client_id in sorted(frame["client_id"].unique()):
        rows = frame[frame["client_id"] == client_id]
        try:
            positions = np.asarray([position_of[int(i)] for i in rows["sample_index"]], dtype=np.int64)
        except KeyError as e:
            raise ContractViolationError(f"Manifest sample {e} is not in the dataset") from e
        client = dataset.subset(positions)
        if not np.array_equal(client.labels, rows["label"].to_numpy(dtype=np.int64)):
            raise ContractViolationError(f"Manifest labels of client {client_id} disagree with the dataset")
        clients.append(client)
    return clients


def client_histogram_frame(clients: List[AreaDataset]) -> pd.DataFrame:
    """Per-client label counts, one row per client."""
    counts = np.vstack([client.label_counts() for client in clients])
    frame = pd.DataFrame(counts, columns=[f"label_{j}" for j in range(counts.shape[1])])
    frame.insert(0, "client_id", np.arange(len(clients)))
    frame["total"] = counts.sum(axis=1)
    return frame


def distributions_frame(
    distributions: List[ClientLabelDistribution], client_groups: List[int]
) -> pd.DataFrame:
    """Drawn target distributions, one row per client."""
    probs = np.vstack([d.probs for d in distributions])
    frame = pd.DataFrame(probs, columns=[f"p_{j}" for j in range(probs.shape[1])])
    frame.insert(0, "group", client_groups)
    frame.insert(0, "client_id", np.arange(len(distributions)))
    return frame
