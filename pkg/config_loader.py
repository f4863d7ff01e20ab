import io
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from dotenv.parser import parse_stream

from logger import configured_logger
from models import RunConfig

load_dotenv()

ENVIRONMENT_KEYS = {"HGS_OUTPUT_DIR": "output_dir", "HGS_WORKERS": "workers"}


class ConfigError(Exception):
    def __init__(self, message: str, line_number: Optional[int] = None, original_error: Optional[Exception] = None):
        super().__init__(message)
        self.line_number = line_number
        self.original_error = original_error


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def read_config_values(path: str) -> Dict[str, str]:
    """
    Read `key = value` lines; `#` starts a comment and values may be quoted.

    Raises:
        ConfigError: unreadable file, unparsable line or key without value.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Could not read config file {path} -> {e}", original_error=e) from e

    values: Dict[str, str] = {}
    for binding in parse_stream(io.StringIO(text)):
        line_number = binding.original.line
        if binding.error:
            raise ConfigError(f"{path}:{line_number}: cannot parse {binding.original.string.strip()!r}", line_number)
        if binding.key is None:
            continue
        if binding.value is None:
            raise ConfigError(f"{path}:{line_number}: key {binding.key!r} has no value", line_number)
        key = _normalize_key(binding.key)
        if key in values:
            configured_logger.warning(f"{path}:{line_number}: {key} set twice, last value wins")
        values[key] = binding.value
    return values


def environment_values() -> Dict[str, str]:
    return {field: os.environ[name] for name, field in ENVIRONMENT_KEYS.items() if os.environ.get(name)}


def load_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Effective run configuration: defaults < config file < environment < overrides.

    Overrides with value None are ignored so unset CLI flags keep the lower layers.
    """
    merged: Dict[str, Any] = {}
    if path:
        merged.update(read_config_values(path))
    merged.update(environment_values())
    merged.update({key: value for key, value in (overrides or {}).items() if value is not None})
    config = RunConfig(**merged)
    configured_logger.debug(f"effective config: {config.model_dump(mode='json')}")
    return config
