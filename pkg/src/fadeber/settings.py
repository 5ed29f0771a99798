"""
Settings loading for fadeber.

Defaults live in the packaged ``config/default_settings.yaml``. A user file, given
explicitly or through ``FADEBER_CONFIG``, is merged over them section by section.
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError

from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_PATH = Path(__file__).parent / "config" / "default_settings.yaml"


class QuadratureSettings(BaseModel):
    """Tolerances for the Rayleigh averaging quadrature."""

    abs_tol: float = Field(1e-300, gt=0)
    rel_tol: float = Field(1e-10, gt=0)
    max_evaluations: int = Field(1_000_000, ge=21)


class FitSettings(BaseModel):
    """Levenberg-Marquardt options and the default fitting grid."""

    max_iter: int = Field(200, ge=1)
    sse_rel_tol: float = Field(1e-12, gt=0)
    grid: str = "0:10:0.1"


class MonteCarloSettings(BaseModel):
    """Monte Carlo defaults."""

    seed: int = Field(20240101, ge=0, lt=2 ** 64)
    samples: int = Field(100_000, ge=1000)
    workers: int = Field(1, ge=1)


class ReproduceSettings(BaseModel):
    """Grids used by the reproduce command."""

    figure_grid: str = "0:50:1"
    table_grid: str = "0:10:0.1"


class LoggingSettings(BaseModel):
    """Logging defaults; FADEBER_LOG_* variables take precedence."""

    level: str = "WARNING"
    json_format: bool = False


class Settings(BaseModel):
    """Validated fadeber settings."""

    quadrature: QuadratureSettings = Field(default_factory=QuadratureSettings)
    fit: FitSettings = Field(default_factory=FitSettings)
    montecarlo: MonteCarloSettings = Field(default_factory=MonteCarloSettings)
    reproduce: ReproduceSettings = Field(default_factory=ReproduceSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)


def _read_yaml(path: Path) -> Dict[str, Any]:
    if not path.exists():
        raise ConfigurationError(f"Settings file not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Invalid settings file {path}: {e}")
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"Settings file {path} must contain a mapping")
    return raw


def _merge_configs(base: Dict[str, Any], updates: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in updates.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge_configs(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_settings(path: Optional[Path] = None) -> Settings:
    """
    Load settings from the packaged defaults and an optional override file.

    Args:
        path: Override file; falls back to the FADEBER_CONFIG environment variable

    Returns:
        Validated Settings

    Raises:
        ConfigurationError: If a file is missing, malformed or fails validation
    """
    raw = _read_yaml(DEFAULT_SETTINGS_PATH)

    override = path
    if override is None and os.getenv('FADEBER_CONFIG'):
        override = Path(os.environ['FADEBER_CONFIG'])

    if override is not None:
        logger.debug(f"Merging settings from {override}")
        raw = _merge_configs(raw, _read_yaml(override))

    try:
        return Settings.model_validate(raw)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid settings: {e}")
