#!/usr/bin/env python3
"""
Workbench Configuration
Size caps, sampling depth, parallelism and output settings.
Layered: defaults < JSON file < environment < explicit overrides.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .errors import InvalidInputError

logger = logging.getLogger("gsim.config")

# Environment variable -> field name
ENV_VARS = {
    'GSIM_WORKERS': 'workers',
    'GSIM_MAX_ENUMERATION': 'max_enumeration_size',
    'GSIM_CONGRUENCE_CAP': 'max_congruence_oracle',
    'GSIM_SAMPLE_DEPTH': 'sample_depth',
    'GSIM_SEED': 'seed',
    'GSIM_FORMAT': 'output_format',
    'GSIM_VALIDATE': 'validate_constructions',
    'GSIM_SEARCH_BUDGET': 'search_budget',
}


@dataclass(frozen=True)
class Config:
    """Runtime settings for enumeration, search and output"""
    max_enumeration_size: int = 64  # refuse subset enumeration above this size
    max_congruence_oracle: int = 9  # brute-force partition search cap
    sample_depth: int = 50  # coordinates checked for rational embeddings
    workers: int = 1  # process pool degree, 1 = serial
    output_format: str = "json"  # json | text
    seed: int = 0
    validate_constructions: bool = True  # re-check laws on every constructor
    search_budget: int = 20000  # algebras examined before a partial verdict
    search_max_size: int = 9
    kripke_worlds: int = 3
    kripke_chain: int = 5
    batch_size: int = 16  # algebras per parallel search batch

    def __post_init__(self):
        positive = ('max_enumeration_size', 'max_congruence_oracle', 'sample_depth',
                    'workers', 'search_budget', 'search_max_size', 'kripke_worlds',
                    'kripke_chain', 'batch_size')
        for name in positive:
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise InvalidInputError(f"config field '{name}' must be a positive integer, got {value!r}")
        if self.output_format not in ('json', 'text'):
            raise InvalidInputError(f"output_format must be 'json' or 'text', got {self.output_format!r}")

    def merged(self, **overrides: Any) -> "Config":
        """Return a copy with the non-None overrides applied"""
        changes = {k: v for k, v in overrides.items() if v is not None}
        unknown = set(changes) - {f.name for f in fields(self)}
        if unknown:
            raise InvalidInputError(f"unknown config fields: {sorted(unknown)}")
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_file(cls, path: Union[str, Path], base: Optional["Config"] = None) -> "Config":
        """Load settings from a JSON object file on top of base"""
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise InvalidInputError(f"cannot read config file {path}: {e}")
        if not isinstance(data, dict):
            raise InvalidInputError(f"config file {path} must hold a JSON object")
        return (base or cls()).merged(**data)

    @classmethod
    def from_env(cls, base: Optional["Config"] = None, environ: Optional[Dict[str, str]] = None) -> "Config":
        """Apply GSIM_* environment variables on top of base"""
        environ = os.environ if environ is None else environ
        base = base or cls()
        overrides: Dict[str, Any] = {}
        for var, name in ENV_VARS.items():
            raw = environ.get(var)
            if raw is None or raw == "":
                continue
            current = getattr(base, name)
            try:
                if isinstance(current, bool):
                    overrides[name] = raw.strip().lower() in ('1', 'true', 'yes', 'on')
                elif isinstance(current, int):
                    overrides[name] = int(raw)
                else:
                    overrides[name] = raw
            except ValueError:
                raise InvalidInputError(f"environment variable {var}={raw!r} is not valid for {name}")
        return base.merged(**overrides)


_current = Config.from_env()


def get_config() -> Config:
    """Current process-wide configuration"""
    return _current


def set_config(config: Config) -> Config:
    global _current
    _current = config
    logger.debug(f"Configuration set: {config.to_dict()}")
    return _current


def configure(**overrides: Any) -> Config:
    """Apply overrides to the current configuration and install the result"""
    return set_config(_current.merged(**overrides))


def load_config(path: Optional[Union[str, Path]] = None, **overrides: Any) -> Config:
    """Build the layered configuration used by entry points"""
    config = Config()
    if path is not None:
        config = Config.from_file(path, base=config)
    config = Config.from_env(base=config)
    return config.merged(**overrides)
