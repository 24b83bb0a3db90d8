"""Builders for hand-made test inputs."""

import numpy as np

from fedloc.data.preprocessing import AreaDataset
from fedloc.data.ujiindoorloc import N_ACCESS_POINTS, RssSample
from fedloc.models.mlp import MlpParams


def make_sample(space_id: int, longitude: float, latitude: float, building: int = 1, floor: int = 1):
    return RssSample(
        rss=np.full(N_ACCESS_POINTS, 100.0),
        longitude=longitude,
        latitude=latitude,
        floor=floor,
        building=building,
        space_id=space_id,
    )


def labeled_pool(counts, n_features: int = 3, seed: int = 0) -> AreaDataset:
    """Dataset with ``counts[j]`` samples of label j and random features in [0, 1]."""
    rng = np.random.default_rng(seed)
    labels = np.repeat(np.arange(len(counts)), counts)
    return AreaDataset(
        features=rng.uniform(0.0, 1.0, size=(labels.size, n_features)),
        labels=labels,
        n_labels=len(counts),
        label_centroids=np.zeros((len(counts), 2)),
    )


def scalar_params(value: float) -> MlpParams:
    """A 1-1 network whose flattened vector is (value, 0)."""
    return MlpParams(((np.array([[value]]), np.array([0.0])),))


def linear_params(weights, bias) -> MlpParams:
    """Single dense layer (no hidden layers)."""
    return MlpParams(((np.asarray(weights, dtype=float), np.asarray(bias, dtype=float)),))
