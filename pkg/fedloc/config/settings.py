"""
Process-level settings for fedloc.
"""

import os
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class FedLocSettings(BaseSettings):
    """Settings read from FEDLOC_* environment variables and .env files"""

    model_config = SettingsConfigDict(
        env_prefix="FEDLOC_",
        env_file=[".env.local", ".env"],
        env_file_encoding="utf-8",
        extra="ignore",
    )

    output_dir: str = Field(
        default="./runs", description="Default directory for all command outputs"
    )
    dataset_path: Optional[str] = Field(
        default=None,
        description="Default UJIIndoorLoc training CSV when the config names none",
    )

    log_level: str = Field(default="INFO", description="Logging level")
    log_dir: str = Field(default="logs", description="Directory for log files")
    log_file: str = Field(default="fedloc.log", description="Log file name")

    workers: int = Field(
        default_factory=lambda: os.cpu_count() or 1,
        ge=1,
        description="Worker processes for Monte-Carlo runs",
    )


_settings: Optional[FedLocSettings] = None


def get_settings() -> FedLocSettings:
    """Singleton for getting settings"""
    global _settings
    if _settings is None:
        _settings = FedLocSettings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the environment is read again."""
    global _settings
    _settings = None
