"""
kvpoly Configuration Manager

Stores oracle and acceptance-check settings in a YAML file with environment overrides.
"""

import copy
import logging
import os
import pathlib
from typing import Any, Dict

import yaml  # type: ignore

logger = logging.getLogger(__name__)

DEFAULT_PATH = "~/.kvpoly/config.yaml"

DEFAULT_CONFIG: Dict[str, Any] = {
    "oracle": {"cap": 12},
    "check": {
        "random_samples": 50,
        "curl_trials": 20,
        "loop_doubling": 10,
        "seed": 2001,
        "max_oracle_crossings": 8,
        "workers": 4,
    },
    "output": {"json_indent": 2},
}

# Environment variable -> dotted config key
ENV_OVERRIDES: Dict[str, str] = {
    "KV_ORACLE_CAP": "oracle.cap",
    "KV_CHECK_SEED": "check.seed",
    "KV_CHECK_WORKERS": "check.workers",
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _parse_value(value: str) -> Any:
    """Interpret a command-line value as YAML so "12" becomes 12 and "true" becomes True."""
    try:
        return yaml.safe_load(value)
    except yaml.YAMLError:
        return value


class ConfigManager:
    """Manages kvpoly settings stored at ~/.kvpoly/config.yaml."""

    def __init__(self, path: str = DEFAULT_PATH) -> None:
        """
        Initialize the configuration manager.

        Args:
            path: Path to the configuration file (defaults to ~/.kvpoly/config.yaml)
        """
        self.path = pathlib.Path(path).expanduser()
        self.config = self.load()
        logger.debug(f"ConfigManager initialized with path: {self.path}")

    def load(self) -> Dict[str, Any]:
        """
        Load configuration from file, filling missing keys from the defaults.

        Returns:
            Configuration dictionary
        """
        if not self.path.exists():
            logger.info(f"Config file not found at {self.path}, using defaults")
            return copy.deepcopy(DEFAULT_CONFIG)

        try:
            with open(self.path, "r", encoding="utf-8") as f:
                loaded = yaml.safe_load(f) or {}
            if not isinstance(loaded, dict):
                raise ValueError("top level is not a mapping")
            logger.info(f"Loaded configuration from {self.path}")
            return _merge(DEFAULT_CONFIG, loaded)
        except Exception as e:
            logger.error(f"Failed to load config from {self.path}: {e}")
            return copy.deepcopy(DEFAULT_CONFIG)

    def save(self) -> None:
        """Save current configuration to file."""
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "w", encoding="utf-8") as f:
                yaml.safe_dump(self.config, f, sort_keys=True)
            logger.info(f"Saved configuration to {self.path}")
        except Exception as e:
            logger.error(f"Failed to save config to {self.path}: {e}")
            raise

    def reset(self) -> None:
        """Restore the defaults and save them."""
        self.config = copy.deepcopy(DEFAULT_CONFIG)
        self.save()
        logger.info("Configuration reset to defaults")

    def set(self, key_path: str, value: Any) -> None:
        """
        Set a configuration value using dot notation.

        Args:
            key_path: Dot-separated path to the key (e.g., "oracle.cap")
            value: Value to set; strings are read as YAML scalars

        Raises:
            ValueError: If the path runs through a non-mapping value
        """
        if isinstance(value, str):
            value = _parse_value(value)
        keys = key_path.split(".")
        d = self.config
        for k in keys[:-1]:
            d = d.setdefault(k, {})
            if not isinstance(d, dict):
                raise ValueError(f"Config key '{k}' in '{key_path}' is not a section")
        d[keys[-1]] = value
        self.save()
        logger.info(f"Set config {key_path} = {value}")

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Get a configuration value using dot notation.

        Environment overrides in ENV_OVERRIDES take precedence over the file.

        Args:
            key_path: Dot-separated path to the key
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        for env_name, env_key in ENV_OVERRIDES.items():
            if env_key == key_path and (raw := os.environ.get(env_name)):
                return _parse_value(raw)

        d: Any = self.config
        for k in key_path.split("."):
            if not isinstance(d, dict) or k not in d:
                return default
            d = d[k]
        return d

    def get_int(self, key_path: str) -> int:
        """
        Integer setting, falling back to the default when the stored value is unusable.

        Raises:
            KeyError: If the key has no default
        """
        value = self.get(key_path)
        try:
            return int(value)
        except (TypeError, ValueError):
            fallback = ConfigManager._default(key_path)
            logger.warning(f"Invalid value {value!r} for {key_path}, using {fallback}")
            return fallback

    @staticmethod
    def _default(key_path: str) -> Any:
        d: Any = DEFAULT_CONFIG
        for k in key_path.split("."):
            d = d[k]
        return d

    def get_oracle_cap(self) -> int:
        """
        Largest crossing count the skein oracle expands.

        Environment variable KV_ORACLE_CAP takes precedence over config file.
        """
        return self.get_int("oracle.cap")
