"""Configuration loader and validator for textkernel."""
from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import ValidationError

from textkernel.core.errors import DataFormatError, InputOutputError
from textkernel.schemas.config import TextKernelConfigSchema

LOGGER = logging.getLogger(__name__)

DEFAULT_CONFIG_NAME = "textkernel.config.yml"


class ConfigLoader:
    """Load and validate configuration files."""

    def __init__(self, base_path: Path) -> None:
        self._base_path = base_path

    def resolve(self, filename: str | Path) -> Path:
        path = Path(filename)
        if not path.is_absolute():
            path = self._base_path / path
        return path

    def load(self, filename: str | Path) -> TextKernelConfigSchema:
        """Load a configuration from YAML and validate it."""
        path = self.resolve(filename)
        try:
            with path.open("r", encoding="utf-8") as handle:
                raw_config = _load_config(handle.read(), path)
        except OSError as exc:
            raise InputOutputError(f"Cannot read config {path}: {exc}") from exc
        return validate_config(raw_config, source=str(path))


def validate_config(raw_config: Dict[str, Any], source: str = "<config>") -> TextKernelConfigSchema:
    try:
        return TextKernelConfigSchema.model_validate(raw_config)
    except ValidationError as exc:
        raise DataFormatError(f"Invalid configuration in {source}: {exc}") from exc


def bootstrap_config(path: Optional[str | Path] = None, base_path: Optional[Path] = None) -> TextKernelConfigSchema:
    """Load ``path`` (or the default config file if present) and expand env vars.

    An explicit path must exist; a missing default file yields built-in defaults.
    """

    loader = ConfigLoader(base_path or Path.cwd())
    if path is None:
        default = loader.resolve(DEFAULT_CONFIG_NAME)
        if not default.exists():
            LOGGER.debug("No %s found, using built-in defaults", DEFAULT_CONFIG_NAME)
            return _expand_env_vars(TextKernelConfigSchema())
        path = default
    config = loader.load(path)

    # Expand environment variables after validation for clarity.
    return _expand_env_vars(config)


def _expand_env_vars(config: TextKernelConfigSchema) -> TextKernelConfigSchema:
    """Expand environment variables in path-valued fields."""

    if config.logging.logfile is not None:
        config.logging.logfile = Path(os.path.expandvars(str(config.logging.logfile)))
    if config.synth.output_dir is not None:
        config.synth.output_dir = Path(os.path.expandvars(str(config.synth.output_dir)))
    return config


def _load_config(text: str, path: Path) -> Dict[str, Any]:
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise DataFormatError(f"Failed to parse configuration {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise DataFormatError(f"Configuration root in {path} must be a mapping.")
    return data


__all__ = ["DEFAULT_CONFIG_NAME", "ConfigLoader", "validate_config", "bootstrap_config"]
