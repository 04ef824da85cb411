"""
Configuration Manager for hyperspectral benchmark runs
Handles loading, merging and validating configuration files
"""

import os
import re
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from ..core.exceptions import ConfigurationError
from .config import ExperimentConfig, LoggingConfig

logger = logging.getLogger(__name__)

ENV_PREFIX = "HYPERSPEC_"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
# YAML 1.1 reads a leading-zero integer such as 010 as octal
DECIMAL_INT = re.compile(r"[+-]?[0-9]+")


class ConfigManager:
    """
    Layers configuration sources, later ones winning:

    built-in defaults < config file < HYPERSPEC_* environment < CLI overrides

    Config files are either YAML mappings (``.yaml``/``.yml``) or flat
    ``key=value`` text with ``#`` comments. Flat values are typed with YAML
    scalar rules, so ``seed=7`` is an integer and ``grid_search=false`` a
    boolean.
    """

    def __init__(self, config_file: Optional[str] = None, env_file: Optional[str] = None):
        self.config_file = Path(config_file) if config_file else None
        self.env_file = env_file
        self.default_config = self._get_default_config()
        self.config: Dict[str, Any] = {}

    def load_config(self, overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Load every layer and validate the merged result."""
        self.config = dict(self.default_config)

        if self.config_file is not None:
            if not self.config_file.exists():
                raise ConfigurationError(f"configuration file not found: {self.config_file}")
            logger.info(f"Loading configuration from {self.config_file}")
            self._merge(self._load_file(self.config_file), source=str(self.config_file))

        self._merge(self._load_environment(), source="environment")

        if overrides:
            self._merge({k: v for k, v in overrides.items() if v is not None}, source="command line")

        self._validate_config()
        logger.debug(f"Effective configuration: {self.config}")
        return self.config

    def _get_default_config(self) -> Dict[str, Any]:
        """Get default configuration values"""
        return {
            # Inputs
            'cube': None,
            'gt': None,

            # Sweep
            'bands': None,  # 10,20,...,100 capped at the band count
            'classifiers': 'all-paper',
            'seed': 0,
            'train_fraction': 0.5,
            'cv_folds': 5,
            'grid_search': True,
            'standardize': True,
            'rf_trees': 100,
            'workers': 1,

            # Band selection
            'levels': 256,
            'max_bands': None,
            'threshold': 0.0,
            'gest_mode': 'mean',

            # Output
            'out': 'output',
            'inline_timing': False,
            'render_maps': True,

            # Logging
            'log_level': 'INFO',
            'log_file': None,
        }

    def _load_file(self, path: Path) -> Dict[str, Any]:
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as e:
            logger.error(f"Failed to read configuration file: {e}")
            raise ConfigurationError(f"cannot read configuration file {path}: {e}")

        if path.suffix.lower() in ('.yaml', '.yml'):
            try:
                values = yaml.safe_load(text) or {}
            except yaml.YAMLError as e:
                logger.error(f"Invalid YAML in configuration file: {e}")
                raise ConfigurationError(f"invalid YAML in {path}: {e}")
            if not isinstance(values, dict):
                raise ConfigurationError(f"{path} must contain a mapping of keys to values")
            return values
        return self._parse_key_values(text, path)

    @staticmethod
    def _parse_scalar(raw: str) -> Any:
        raw = raw.strip()
        if raw == '':
            return None
        if DECIMAL_INT.fullmatch(raw):
            return int(raw)
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError:
            return raw
        if isinstance(value, str):
            # YAML 1.1 reads exponent-only floats such as 1e-3 as strings
            try:
                return float(value)
            except ValueError:
                return value
        return value

    def _parse_key_values(self, text: str, path: Path) -> Dict[str, Any]:
        values: Dict[str, Any] = {}
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            key, sep, raw = line.partition('=')
            if not sep or not key.strip():
                raise ConfigurationError(f"{path}:{number}: expected key=value, got {line!r}")
            values[key.strip().replace('-', '_')] = self._parse_scalar(raw)
        return values

    def _load_environment(self) -> Dict[str, Any]:
        load_dotenv(self.env_file)
        values = {}
        for key in self.default_config:
            raw = os.environ.get(f"{ENV_PREFIX}{key.upper()}")
            if raw is not None:
                values[key] = self._parse_scalar(raw)
        return values

    def _merge(self, values: Dict[str, Any], source: str):
        unknown = sorted(set(values) - set(self.default_config))
        if unknown:
            logger.warning(f"Ignoring unknown configuration keys from {source}: {unknown}")
        for key, value in values.items():
            if key in self.default_config:
                self.config[key] = value

    def _validate_config(self):
        """Validate configuration values"""
        gest_mode = self.config.get('gest_mode')
        if gest_mode not in ('mean', 'pairwise'):
            raise ConfigurationError(f"gest_mode must be 'mean' or 'pairwise', got {gest_mode!r}")
        level = str(self.config.get('log_level') or 'INFO').upper()
        if level not in LOG_LEVELS:
            raise ConfigurationError(f"invalid log_level: {self.config.get('log_level')!r}")
        self.config['log_level'] = level
        if isinstance(self.config.get('classifiers'), (list, tuple)):
            self.config['classifiers'] = ','.join(str(c) for c in self.config['classifiers'])

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value by key"""
        return self.config.get(key, default)

    def set(self, key: str, value: Any):
        """Set configuration value by key"""
        self.config[key] = value

    def save_config(self, file_path: str):
        """Save the current configuration as YAML."""
        try:
            with open(file_path, 'w', encoding='utf-8') as file:
                yaml.safe_dump(self.config, file, default_flow_style=False, sort_keys=True)
            logger.info(f"Configuration saved to {file_path}")
        except OSError as e:
            logger.error(f"Failed to save configuration: {e}")
            raise ConfigurationError(f"cannot write configuration file {file_path}: {e}")

    def get_experiment_config(self) -> ExperimentConfig:
        """Experiment settings from the loaded configuration."""
        if not self.config:
            self.load_config()
        return ExperimentConfig.from_dict(self.config)

    def get_logging_config(self) -> LoggingConfig:
        log_file = self.config.get('log_file')
        return LoggingConfig(
            level=self.config.get('log_level', 'INFO'),
            file_path=log_file,
            enable_file=bool(log_file),
        )

    def validate_required_fields(self, required_fields: list):
        """Raise ConfigurationError listing any missing required fields."""
        missing_fields = [f for f in required_fields if self.config.get(f) in (None, '')]
        if missing_fields:
            logger.error(f"Missing required configuration fields: {missing_fields}")
            raise ConfigurationError(f"missing required configuration: {', '.join(missing_fields)}")
