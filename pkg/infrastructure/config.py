import json
import logging
import os
from dataclasses import asdict, dataclass, fields
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from core.errors import GenLogicError
from shared.config import Config

logger = logging.getLogger(__name__)


class ConfigSource(Enum):
    ENVIRONMENT = "environment"
    FILE = "file"
    DEFAULT = "default"


@dataclass
class EngineConfig:
    enumeration_bound: int = Config.ENUMERATION_BOUND
    subset_bound: int = Config.SUBSET_BOUND
    decimal_places: int = Config.DECIMAL_PLACES


@dataclass
class CheckConfig:
    trials: int = Config.CHECK_TRIALS
    seed: int = Config.CHECK_SEED
    max_atoms: int = Config.CHECK_MAX_ATOMS
    max_depth: int = Config.CHECK_MAX_DEPTH
    max_delta: int = Config.CHECK_MAX_DELTA
    max_workers: int = Config.MAX_WORKERS
    use_multiprocess: bool = Config.USE_MULTIPROCESS


@dataclass
class LoggingConfig:
    level: str = Config.LOG_LEVEL
    format: str = "[%(asctime)s] %(levelname)s %(name)s: %(message)s"


_SECTIONS = {
    'engine': EngineConfig,
    'check': CheckConfig,
    'logging': LoggingConfig,
}

ENV_MAPPINGS = {
    'GENLOGIC_ENUMERATION_BOUND': 'engine.enumeration_bound',
    'GENLOGIC_SUBSET_BOUND': 'engine.subset_bound',
    'GENLOGIC_DECIMAL_PLACES': 'engine.decimal_places',
    'GENLOGIC_CHECK_TRIALS': 'check.trials',
    'GENLOGIC_CHECK_SEED': 'check.seed',
    'GENLOGIC_CHECK_MAX_ATOMS': 'check.max_atoms',
    'GENLOGIC_CHECK_MAX_DEPTH': 'check.max_depth',
    'GENLOGIC_CHECK_MAX_DELTA': 'check.max_delta',
    'GENLOGIC_MAX_WORKERS': 'check.max_workers',
    'GENLOGIC_USE_MULTIPROCESS': 'check.use_multiprocess',
    'GENLOGIC_LOG_LEVEL': 'logging.level',
}

CONFIG_FILE_NAMES = (
    "genlogic.yaml",
    "genlogic.yml",
    "genlogic.json",
    ".genlogic.yaml",
)


class ConfigManager:
    """Layered settings: dataclass defaults, then a YAML/JSON file, then GENLOGIC_* variables."""

    def __init__(self, config_file: Optional[str] = None):
        self.config_file = config_file or self._find_config_file()
        self._config_cache: Dict[str, Any] = {}
        self._sources: Dict[str, ConfigSource] = {}
        self._load_configurations(explicit=config_file is not None)

    def _find_config_file(self) -> Optional[str]:
        current_dir = Path.cwd()
        for _ in range(5):
            for name in CONFIG_FILE_NAMES:
                config_path = current_dir / name
                if config_path.exists():
                    return str(config_path)
            current_dir = current_dir.parent
        return None

    def _load_configurations(self, explicit: bool):
        self._load_defaults()
        if self.config_file:
            self._load_from_file(explicit)
        self._load_from_environment()

    def _load_defaults(self):
        for section, cls in _SECTIONS.items():
            for key, value in asdict(cls()).items():
                config_key = f"{section}.{key}"
                self._config_cache[config_key] = value
                self._sources[config_key] = ConfigSource.DEFAULT

    def _load_from_file(self, explicit: bool):
        file_path = Path(self.config_file)
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                if file_path.suffix.lower() == '.json':
                    config_data = json.load(f)
                else:
                    config_data = yaml.safe_load(f)
        except (OSError, ValueError, yaml.YAMLError) as e:
            if explicit:
                raise GenLogicError(f"Cannot read config file {self.config_file}: {e}") from e
            logger.warning("Failed to load config file %s: %s", self.config_file, e)
            return
        if config_data is None:
            return
        if not isinstance(config_data, dict):
            raise GenLogicError(f"Config file {self.config_file} must hold a mapping")
        self._flatten_config(config_data, source=ConfigSource.FILE)

    def _load_from_environment(self):
        for env_var, config_key in ENV_MAPPINGS.items():
            env_value = os.getenv(env_var)
            if env_value is not None:
                self._config_cache[config_key] = self._convert_env_value(env_value)
                self._sources[config_key] = ConfigSource.ENVIRONMENT

    def _flatten_config(self, config_data: Dict, prefix: str = "",
                        source: ConfigSource = ConfigSource.FILE):
        for key, value in config_data.items():
            full_key = f"{prefix}.{key}" if prefix else key
            if isinstance(value, dict):
                self._flatten_config(value, full_key, source)
            else:
                self._config_cache[full_key] = value
                self._sources[full_key] = source

    def _convert_env_value(self, value: str) -> Any:
        if value.lower() in ['true', 'yes', 'on']:
            return True
        if value.lower() in ['false', 'no', 'off']:
            return False
        try:
            return int(value)
        except ValueError:
            return value

    def get_section(self, section: str) -> Dict[str, Any]:
        prefix = f"{section}."
        known = {f.name for f in fields(_SECTIONS[section])}
        section_values = {
            k[len(prefix):]: v
            for k, v in self._config_cache.items()
            if k.startswith(prefix)
        }
        unknown = set(section_values) - known
        if unknown:
            logger.warning("Ignoring unknown %s setting(s): %s", section, ", ".join(sorted(unknown)))
        return {
            f.name: self._coerce(f"{prefix}{f.name}", section_values[f.name], f.type)
            for f in fields(_SECTIONS[section]) if f.name in section_values
        }

    def _coerce(self, key: str, value: Any, expected: type) -> Any:
        if expected is bool:
            if isinstance(value, str):
                value = self._convert_env_value(value)
            if isinstance(value, bool):
                return value
        elif expected is int:
            if isinstance(value, str):
                value = self._convert_env_value(value.strip())
            if isinstance(value, int) and not isinstance(value, bool):
                return value
        elif isinstance(value, expected):
            return value
        raise GenLogicError(
            f"Config setting {key} must be {expected.__name__}, got {value!r} ({self._sources[key].value})"
        )

    def get_engine_config(self) -> EngineConfig:
        return EngineConfig(**self.get_section('engine'))

    def get_check_config(self) -> CheckConfig:
        return CheckConfig(**self.get_section('check'))

    def get_logging_config(self) -> LoggingConfig:
        return LoggingConfig(**self.get_section('logging'))

    def get_config_source(self, key: str) -> Optional[ConfigSource]:
        return self._sources.get(key)


_config_manager: Optional[ConfigManager] = None


def get_config(config_file: Optional[str] = None) -> ConfigManager:
    global _config_manager
    if _config_manager is None or config_file is not None:
        _config_manager = ConfigManager(config_file)
    return _config_manager


def reset_config():
    global _config_manager
    _config_manager = None
