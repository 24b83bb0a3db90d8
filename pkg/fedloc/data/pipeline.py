"""
From a dataset configuration to a labeled, normalized area dataset.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from ..config.config_models import DatasetConfig
from ..config.settings import get_settings
from ..exceptions import ConfigError, ContractViolationError
from ..utils.logging_utils import LogContext
from .preprocessing import AreaDataset, build_area_dataset
from .rooms import RoomClustering
from .store import load_area_dataset
from .synthetic import synthetic_samples
from .ujiindoorloc import RssSample, filter_building_floor, load_ujiindoorloc


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PreparedData:
    """Dataset plus the clustering that produced its labels (absent for processed files)."""

    dataset: AreaDataset
    clustering: Optional[RoomClustering] = None


def resolve_dataset_path(config: DatasetConfig) -> Optional[Path]:
    """Configured path, falling back to FEDLOC_DATASET_PATH."""
    raw = config.path or get_settings().dataset_path
    return Path(raw) if raw else None


def check_dataset_source(config: DatasetConfig) -> None:
    """
    Fail early, as a usage error, when a file-based source is missing.

    Raises:
        ConfigError: Path unset or not an existing file
    """
    if config.source == "synthetic":
        return
    path = resolve_dataset_path(config)
    if path is None:
        raise ConfigError(f"dataset.path is required for source '{config.source}'")
    if not path.is_file():
        raise ConfigError(f"Dataset file not found: {path}")


def load_floor_samples(config: DatasetConfig) -> List[RssSample]:
    """Raw samples of the configured building and floor."""
    if config.source == "synthetic":
        synthetic = config.synthetic
        samples = synthetic_samples(
            n_rooms=synthetic.n_rooms,
            samples_per_room=synthetic.samples_per_room,
            n_access_points=synthetic.n_access_points,
            building=config.building,
            floor=config.floor,
            seed=synthetic.seed,
        )
    else:
        check_dataset_source(config)
        samples = load_ujiindoorloc(resolve_dataset_path(config))
    return filter_building_floor(samples, config.building, config.floor)


def prepare_area_dataset(config: DatasetConfig, n_labels: int) -> PreparedData:
    """
    Load, filter, cluster and normalize according to ``config``.

    Args:
        config: Dataset section of the experiment configuration
        n_labels: Number of areas L

    Returns:
        PreparedData with the dataset and, for raw sources, the room clustering
    """
    with LogContext(logger, f"preparing dataset (source={config.source}, L={n_labels})"):
        if config.source == "processed":
            check_dataset_source(config)
            dataset = load_area_dataset(resolve_dataset_path(config))
            if dataset.n_labels != n_labels:
                raise ContractViolationError(
                    f"Processed dataset has L = {dataset.n_labels}, configuration asks for {n_labels}"
                )
            return PreparedData(dataset=dataset)

        samples = load_floor_samples(config)
        dataset, clustering = build_area_dataset(samples, n_labels, config.cluster_seed)
        logger.info(
            f"Prepared {dataset.size} samples, {dataset.feature_dim} features, "
            f"label counts {dataset.label_counts().tolist()}"
        )
        return PreparedData(dataset=dataset, clustering=clustering)
