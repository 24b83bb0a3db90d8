"""
Configuration: process settings, experiment models and YAML loading.
"""

from .config_manager import ExperimentConfigManager, dump_config, write_config_snapshot
from .config_models import (
    CliConfig,
    DatasetConfig,
    ExperimentConfig,
    FederationConfig,
    FederationStrategy,
    FusionConfig,
    ModelConfig,
    OutputConfig,
    PartitionConfig,
    Strategy,
    SweepConfig,
    TrainingConfig,
)
from .settings import FedLocSettings, get_settings

__all__ = [
    "CliConfig",
    "DatasetConfig",
    "ExperimentConfig",
    "ExperimentConfigManager",
    "FedLocSettings",
    "FederationConfig",
    "FederationStrategy",
    "FusionConfig",
    "ModelConfig",
    "OutputConfig",
    "PartitionConfig",
    "Strategy",
    "SweepConfig",
    "TrainingConfig",
    "dump_config",
    "get_settings",
    "write_config_snapshot",
]
