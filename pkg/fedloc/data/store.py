"""
Processed-dataset container and label-map report.

Container: uncompressed ``.npz`` with ``features`` (float64), ``labels``
(int64), ``index`` (int64), ``n_labels`` (int64 scalar) and
``label_centroids`` (float64, columns latitude/longitude).
"""

import logging
from pathlib import Path
from typing import Tuple

import numpy as np
import pandas as pd

from ..utils.file_utils import ensure_directory, write_frame
from .preprocessing import AreaDataset
from .rooms import RoomClustering


logger = logging.getLogger(__name__)


def save_area_dataset(path: Path, dataset: AreaDataset) -> Path:
    path = Path(path)
    ensure_directory(path.parent)
    with open(path, "wb") as f:
        np.savez(
            f,
            features=dataset.features,
            labels=dataset.labels,
            index=dataset.index,
            n_labels=np.asarray(dataset.n_labels, dtype=np.int64),
            label_centroids=dataset.label_centroids,
        )
    logger.info(f"Saved processed dataset ({dataset.size} samples) to {path}")
    return path


def load_area_dataset(path: Path) -> AreaDataset:
    with np.load(Path(path), allow_pickle=False) as archive:
        return AreaDataset(
            features=archive["features"],
            labels=archive["labels"],
            n_labels=int(archive["n_labels"]),
            label_centroids=archive["label_centroids"],
            index=archive["index"],
        )


def label_map_frames(clustering: RoomClustering) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Tables of the room-to-area grouping.

    Returns:
        (per space-id table, per label centroid table)
    """
    rooms = pd.DataFrame(
        {
            "space_id": clustering.space_ids,
            "label": clustering.room_labels,
            "latitude": clustering.room_centroids[:, 0],
            "longitude": clustering.room_centroids[:, 1],
            "n_samples": clustering.room_sample_counts,
        }
    ).sort_values(["label", "space_id"], kind="mergesort")

    labels = np.arange(clustering.n_labels)
    centroids = pd.DataFrame(
        {
            "label": labels,
            "latitude": clustering.label_centroids[:, 0],
            "longitude": clustering.label_centroids[:, 1],
            "n_rooms": np.bincount(clustering.room_labels, minlength=clustering.n_labels),
            "n_samples": np.bincount(
                clustering.room_labels,
                weights=clustering.room_sample_counts,
                minlength=clustering.n_labels,
            ).astype(np.int64),
        }
    )
    return rooms, centroids


def write_label_map_report(clustering: RoomClustering, output_dir: Path) -> Tuple[Path, Path]:
    rooms, centroids = label_map_frames(clustering)
    return (
        write_frame(rooms, Path(output_dir) / "label_map.csv"),
        write_frame(centroids, Path(output_dir) / "label_centroids.csv"),
    )
