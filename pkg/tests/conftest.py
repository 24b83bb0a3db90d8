"""Shared fixtures: synthetic UJIIndoorLoc data, toy datasets and small configs."""

from pathlib import Path

import numpy as np
import pytest

from fedloc.config.config_models import (
    DatasetConfig,
    ExperimentConfig,
    FederationConfig,
    ModelConfig,
    PartitionConfig,
    SyntheticConfig,
    TrainingConfig,
)
from fedloc.config.settings import reset_settings
from fedloc.data.preprocessing import AreaDataset, build_area_dataset
from fedloc.data.synthetic import synthetic_samples, synthetic_ujiindoorloc, write_ujiindoorloc_csv
from fedloc.data.ujiindoorloc import filter_building_floor
from fedloc.models.mlp import LabeledBatch


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch, tmp_path):
    """Fresh settings per test, logs and outputs under tmp_path."""
    for name in ("FEDLOC_OUTPUT_DIR", "FEDLOC_DATASET_PATH", "FEDLOC_WORKERS", "FEDLOC_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("FEDLOC_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("FEDLOC_WORKERS", "1")
    reset_settings()
    yield
    reset_settings()


@pytest.fixture(scope="session")
def synthetic_frame():
    return synthetic_ujiindoorloc(n_rooms=16, samples_per_room=20, n_access_points=60, seed=3)


@pytest.fixture
def synthetic_csv(tmp_path, synthetic_frame) -> Path:
    return write_ujiindoorloc_csv(synthetic_frame, tmp_path / "trainingData.csv")


@pytest.fixture(scope="session")
def floor_samples():
    samples = synthetic_samples(n_rooms=16, samples_per_room=20, n_access_points=60, seed=3)
    return filter_building_floor(samples, building=1, floor=1)


@pytest.fixture(scope="session")
def area_dataset(floor_samples) -> AreaDataset:
    dataset, _ = build_area_dataset(floor_samples, n_labels=4, seed=0)
    return dataset


@pytest.fixture
def separable_batch() -> LabeledBatch:
    """Four points, two classes split by the first coordinate."""
    return LabeledBatch(
        features=np.array([[0.0, 0.2], [0.1, 0.9], [0.9, 0.1], [1.0, 0.8]]),
        labels=np.array([0, 0, 1, 1]),
    )


@pytest.fixture
def smoke_config() -> ExperimentConfig:
    """A complete experiment that trains in well under a second per run."""
    return ExperimentConfig(
        n_labels=4,
        n_clients=3,
        monte_carlo_runs=2,
        master_seed=11,
        dataset=DatasetConfig(
            source="synthetic",
            synthetic=SyntheticConfig(n_rooms=16, samples_per_room=20, n_access_points=60, seed=3),
        ),
        partition=PartitionConfig(n_groups=3, labels_per_group=1),
        model=ModelConfig(hidden_layers=[8]),
        federation=FederationConfig(
            rounds=2,
            training=TrainingConfig(learning_rate=0.2, epochs=2, batch_size=16),
        ),
    )
