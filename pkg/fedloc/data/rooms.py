"""
Grouping of neighbouring rooms into L labeled areas.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import List

import numpy as np
from sklearn.cluster import KMeans

from ..exceptions import ContractViolationError, ParameterError
from .ujiindoorloc import RssSample


logger = logging.getLogger(__name__)

KMEANS_RESTARTS = 50


@dataclass(frozen=True, eq=False)
class RoomClustering:
    """Space-id to area-label assignment.

    Coordinates are stored as (latitude, longitude) columns.
    """

    space_ids: np.ndarray
    room_centroids: np.ndarray
    room_sample_counts: np.ndarray
    room_labels: np.ndarray
    label_centroids: np.ndarray

    @property
    def n_labels(self) -> int:
        return int(self.label_centroids.shape[0])

    def labels_for(self, samples: List[RssSample]) -> np.ndarray:
        """Area label of every sample, looked up by space-id."""
        mapping = dict(zip(self.space_ids.tolist(), self.room_labels.tolist()))
        try:
            return np.asarray([mapping[s.space_id] for s in samples], dtype=np.int64)
        except KeyError as e:
            raise ContractViolationError(f"Space-id {e.args[0]} was not clustered") from e


def room_centroids(samples: List[RssSample]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Mean coordinates per space-id.

    Returns:
        (sorted space-ids, centroids[n_rooms x (lat, lon)], sample counts)
    """
    space = np.asarray([s.space_id for s in samples], dtype=np.int64)
    coords = np.asarray([(s.latitude, s.longitude) for s in samples], dtype=np.float64)
    space_ids, inverse, counts = np.unique(space, return_inverse=True, return_counts=True)
    sums = np.zeros((space_ids.size, 2))
    np.add.at(sums, inverse, coords)
    return space_ids, sums / counts[:, np.newaxis], counts


def cluster_rooms(samples: List[RssSample], n_labels: int, seed: int) -> RoomClustering:
    """
    k-means over per-room centroids, labels ordered by centroid longitude then latitude.

    Args:
        samples: Samples of a single floor
        n_labels: Number of areas L
        seed: Seed of the k-means++ restarts

    Returns:
        RoomClustering mapping each space-id to one of L labels
    """
    space_ids, centroids, counts = room_centroids(samples)
    n_rooms = space_ids.size
    if n_labels < 1 or n_labels > n_rooms:
        raise ParameterError(f"L must be in [1, {n_rooms}] for {n_rooms} rooms, got {n_labels}")
    n_distinct = np.unique(centroids, axis=0).shape[0]
    if n_labels > n_distinct:
        raise ParameterError(
            f"L = {n_labels} exceeds the {n_distinct} distinct room positions"
        )

    if n_labels == 1:
        raw_labels = np.zeros(n_rooms, dtype=np.int64)
    else:
        kmeans = KMeans(
            n_clusters=n_labels,
            init="k-means++",
            n_init=KMEANS_RESTARTS,
            random_state=seed,
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            raw_labels = kmeans.fit_predict(centroids).astype(np.int64)

    centers = np.vstack([centroids[raw_labels == k].mean(axis=0) for k in range(n_labels)])
    # lexsort uses the last key as primary: longitude, then latitude
    order = np.lexsort((centers[:, 0], centers[:, 1]))
    relabel = np.empty(n_labels, dtype=np.int64)
    relabel[order] = np.arange(n_labels)

    clustering = RoomClustering(
        space_ids=space_ids,
        room_centroids=centroids,
        room_sample_counts=counts,
        room_labels=relabel[raw_labels],
        label_centroids=centers[order],
    )
    logger.info(f"Grouped {n_rooms} rooms into {n_labels} areas")
    return clustering
