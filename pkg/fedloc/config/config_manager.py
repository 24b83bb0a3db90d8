"""
Experiment configuration manager: loads, overrides, validates and snapshots configs.
"""

import logging
from pathlib import Path
from typing import Iterable, Optional

import yaml
from pydantic import ValidationError

from ..exceptions import ConfigError
from .config_loader import apply_overrides, load_yaml_with_env
from .config_models import ExperimentConfig


logger = logging.getLogger(__name__)

SNAPSHOT_NAME = "resolved_config.yaml"


class ExperimentConfigManager:
    """Manager for loading and accessing an experiment configuration."""

    def __init__(self, config_path: str, overrides: Optional[Iterable[str]] = None):
        """
        Initialize the configuration manager.

        Args:
            config_path: Path to the experiment YAML file
            overrides: ``dotted.key=value`` pairs applied after file parsing
        """
        self.config_path = config_path
        self.overrides = list(overrides or [])
        self._config: Optional[ExperimentConfig] = None
        self._load_config()

    def _load_config(self) -> None:
        """Load, override and validate configuration from YAML file."""
        config_file = Path(self.config_path)
        if not config_file.exists():
            logger.error(f"Configuration file not found: {self.config_path}")
            raise ConfigError(f"Configuration file not found: {self.config_path}")

        try:
            yaml_data = load_yaml_with_env(str(config_file))
        except yaml.YAMLError as e:
            logger.error(f"Invalid YAML in configuration file {self.config_path}: {e}")
            raise ConfigError(f"Invalid YAML in {self.config_path}: {e}") from e
        except OSError as e:
            logger.error(f"Cannot read configuration file {self.config_path}: {e}")
            raise ConfigError(f"Cannot read {self.config_path}: {e}") from e

        if not isinstance(yaml_data, dict):
            raise ConfigError(f"Configuration root must be a mapping: {self.config_path}")

        apply_overrides(yaml_data, self.overrides)

        try:
            self._config = ExperimentConfig(**yaml_data)
        except ValidationError as e:
            logger.error(f"Configuration validation failed for {self.config_path}: {e}")
            raise ConfigError(f"Configuration validation failed: {e}") from e

        logger.info(
            f"Loaded configuration from {self.config_path}"
            + (f" with {len(self.overrides)} override(s)" if self.overrides else "")
        )

    def get_config(self) -> ExperimentConfig:
        """
        Get the validated experiment configuration.

        Returns:
            ExperimentConfig with overrides applied
        """
        if not self._config:
            raise RuntimeError("Configuration not loaded")
        return self._config

    def write_snapshot(self, output_dir: Path) -> Path:
        """
        Write the resolved configuration next to the outputs it produced.

        Args:
            output_dir: Command output directory

        Returns:
            Path of the written snapshot
        """
        return write_config_snapshot(self.get_config(), output_dir)


def dump_config(config: ExperimentConfig) -> str:
    """Serialize a validated configuration back to YAML."""
    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=False)


def write_config_snapshot(config: ExperimentConfig, output_dir: Path) -> Path:
    """Write ``resolved_config.yaml`` into ``output_dir``."""
    output_dir.mkdir(parents=True, exist_ok=True)
    path = output_dir / SNAPSHOT_NAME
    path.write_text(dump_config(config), encoding="utf-8")
    logger.info(f"Resolved configuration written to {path}")
    return path
