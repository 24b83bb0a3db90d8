"""
Feature scaling, labeled area datasets and stratified splitting.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from ..exceptions import ContractViolationError, InvalidInputError, ParameterError
from ..models.mlp import LabeledBatch
from .rooms import RoomClustering, cluster_rooms
from .ujiindoorloc import NOT_DETECTED, RssSample


logger = logging.getLogger(__name__)

FLOOR_DBM = -105.0
DETECTED_MIN_DBM = -104.0
DETECTED_MAX_DBM = 0.0

SeedLike = Union[int, np.random.SeedSequence]


@dataclass(frozen=True, eq=False)
class AreaDataset:
    """Normalized fingerprints labeled with their area.

    ``index`` holds each row's position in the full prepared dataset, so subsets
    (train/test/client shards) keep a stable sample identity.
    """

    features: np.ndarray
    labels: np.ndarray
    n_labels: int
    label_centroids: np.ndarray
    index: Optional[np.ndarray] = None

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if features.ndim != 2 or labels.ndim != 1 or features.shape[0] != labels.shape[0]:
            raise ContractViolationError(
                f"Expected features[n, F] and labels[n], got {features.shape} and {labels.shape}"
            )
        if labels.size and (labels.min() < 0 or labels.max() >= self.n_labels):
            raise ContractViolationError(f"Labels must lie in [0, {self.n_labels})")
        if features.size and (features.min() < 0.0 or features.max() > 1.0):
            raise InvalidInputError("Normalized features must lie in [0, 1]")
        index = (
            np.arange(labels.size, dtype=np.int64)
            if self.index is None
            else np.asarray(self.index, dtype=np.int64)
        )
        if index.shape != labels.shape:
            raise ContractViolationError("index must have one entry per sample")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "label_centroids", np.asarray(self.label_centroids, dtype=np.float64))
        object.__setattr__(self, "index", index)

    @property
    def size(self) -> int:
        return int(self.labels.size)

    @property
    def feature_dim(self) -> int:
        return int(self.features.shape[1])

    def label_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_labels)

    def subset(self, positions: np.ndarray) -> "AreaDataset":
        """Rows at ``positions`` (positions within this dataset, not global ids)."""
        positions = np.asarray(positions, dtype=np.int64)
        return AreaDataset(
            features=self.features[positions],
            labels=self.labels[positions],
            n_labels=self.n_labels,
            label_centroids=self.label_centroids,
            index=self.index[positions],
        )

    def to_batch(self) -> LabeledBatch:
        return LabeledBatch(self.features, self.labels)


def normalize_rss(rss: np.ndarray) -> Tuple[np.ndarray, int]:
    """
    Map raw dBm readings to [0, 1].

    The not-detected sentinel (100) becomes -105 dBm, then [-105, 0] is mapped
    affinely onto [0, 1]. Other readings outside [-104, 0] are clipped.

    Returns:
        (scaled values, number of clipped out-of-range readings)
    """
    rss = np.asarray(rss, dtype=np.float64)
    sentinel = rss == NOT_DETECTED
    out_of_range = ~sentinel & ((rss < DETECTED_MIN_DBM) | (rss > DETECTED_MAX_DBM))
    cleaned = np.where(sentinel, FLOOR_DBM, rss)
    scaled = (cleaned - FLOOR_DBM) / (DETECTED_MAX_DBM - FLOOR_DBM)
    return np.clip(scaled, 0.0, 1.0), int(out_of_range.sum())


def normalize_features(samples: List[RssSample]) -> np.ndarray:
    """Scaled feature matrix of a sample list (see :func:`normalize_rss`)."""
    if not samples:
        return np.zeros((0, 0))
    features, clipped = normalize_rss(np.vstack([s.rss for s in samples]))
    if clipped:
        logger.warning(f"Clipped {clipped} RSS readings outside [-104, 0] dBm")
    return features


def build_area_dataset(
    samples: List[RssSample], n_labels: int, seed: int
) -> Tuple[AreaDataset, RoomClustering]:
    """
    Cluster rooms into areas and scale features.

    Returns:
        (dataset, clustering used for the labels)
    """
    clustering = cluster_rooms(samples, n_labels, seed)
    dataset = AreaDataset(
        features=normalize_features(samples),
        labels=clustering.labels_for(samples),
        n_labels=n_labels,
        label_centroids=clustering.label_centroids,
    )
    empty = np.flatnonzero(dataset.label_counts() == 0)
    if empty.size:
        raise ParameterError(f"Areas without samples: {empty.tolist()}")
    return dataset, clustering


def split_train_test(
    dataset: AreaDataset, test_fraction: float, seed: SeedLike
) -> Tuple[AreaDataset, AreaDataset]:
    """
    Stratified split: round(test_fraction * n_j) samples of every label go to test.

    Args:
        dataset: Full dataset
        test_fraction: Share of each label held out, in [0, 1]
        seed: Seed of the shuffling stream

    Returns:
        (train, test), disjoint, each in dataset order
    """
    if not 0.0 <= test_fraction <= 1.0:
        raise ParameterError(f"test_fraction must lie in [0, 1], got {test_fraction}")
    rng = np.random.default_rng(seed)
    test_positions = []
    for label in range(dataset.n_labels):
        members = np.flatnonzero(dataset.labels == label)
        n_test = int(np.floor(test_fraction * members.size + 0.5))
        test_positions.append(rng.permutation(members)[:n_test])
    test = np.sort(np.concatenate(test_positions)).astype(np.int64)
    train = np.setdiff1d(np.arange(dataset.size), test)
    return dataset.subset(train), dataset.subset(test)
