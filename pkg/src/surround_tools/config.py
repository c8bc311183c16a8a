import logging
import os
from dataclasses import dataclass, fields, replace, asdict
from typing import Any, Dict, Mapping, Optional

from dotenv import load_dotenv, dotenv_values

from .errors import ConfigError
from .helper import create_logger, parse_level

# Do NOT directly import any other modules that use the logger in config.py
# It could lead to circular dependencies and/or other initialization problems.
# Any logging activities inside other modules should use the global logger, by adding the following:
# from .config import get_global_logger
# logger = get_global_logger()

# region environment

# .env in the working directory feeds the process environment, it never overrides variables already set
load_dotenv(override=False)

ENV_PREFIX = 'SURROUND_'

# endregion

global_logger = create_logger(filename=__package__, name='surround_logger',
                              level=parse_level(os.getenv('SURROUND_LOG_LEVEL'), default=logging.DEBUG),
                              console_level=parse_level(os.getenv('SURROUND_CONSOLE_LEVEL'), default=logging.INFO))


def get_global_logger() -> logging.Logger:
    """
    Accessor function to retrieve the central logger instance.

    Returns:
        logging.Logger: The configured global logger instance.
    """
    return global_logger


# region settings


@dataclass(frozen=True)
class Settings:
    """
    Resolved run settings.

    Precedence, highest first: command-line flags, ``--config`` file (dotenv ``KEY=VALUE`` syntax),
    process environment (including a ``.env`` file in the working directory), built-in defaults.
    Keys in files and environment are the upper-cased field names with the ``SURROUND_`` prefix,
    e.g. ``SURROUND_BUDGET=50000000``.
    """
    budget: int = 200_000_000
    workers: int = 1
    seed: int = 0
    step_factor: int = 4
    chunk: int = 4_000_000
    log_level: str = 'DEBUG'

    @classmethod
    def resolve(cls, flags: Optional[Mapping[str, Any]] = None, config_path: Optional[str] = None,
                environ: Optional[Mapping[str, str]] = None) -> 'Settings':
        """
        Builds settings from the four layers.

        :param flags: Values given on the command line; ``None`` entries are ignored.
        :param config_path: Optional dotenv-style config file.
        :param environ: Environment mapping, ``os.environ`` by default.
        :raises ConfigError: If the config file is missing or a value does not parse.
        """
        settings = cls()
        environ = os.environ if environ is None else environ
        settings = settings._apply(_prefixed(environ), source='environment')
        if config_path is not None:
            if not os.path.isfile(config_path):
                raise ConfigError(f'config file {config_path} does not exist')
            file_values = {k: v for k, v in dotenv_values(config_path).items() if v is not None}
            settings = settings._apply(_prefixed(file_values), source=config_path)
        if flags:
            settings = settings._apply({k: v for k, v in flags.items() if v is not None}, source='flags')
        settings.validate()
        return settings

    def _apply(self, values: Mapping[str, Any], source: str) -> 'Settings':
        updates = {}
        for f in fields(self):
            if f.name not in values:
                continue
            raw = values[f.name]
            try:
                updates[f.name] = raw if f.type in ('str', str) else int(str(raw).replace('_', ''))
            except ValueError as e:
                raise ConfigError(f'{source}: {f.name}={raw!r} is not an integer') from e
        return replace(self, **updates) if updates else self

    def validate(self) -> None:
        if self.budget < 1:
            raise ConfigError(f'budget must be positive, got {self.budget}')
        if self.workers < 1:
            raise ConfigError(f'workers must be positive, got {self.workers}')
        if self.step_factor < 1:
            raise ConfigError(f'step_factor must be positive, got {self.step_factor}')
        if self.chunk < 1024:
            raise ConfigError(f'chunk must be at least 1024, got {self.chunk}')

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _prefixed(values: Mapping[str, str]) -> Dict[str, str]:
    # SURROUND_STEP_FACTOR -> step_factor
    return {key[len(ENV_PREFIX):].lower(): value for key, value in values.items() if key.startswith(ENV_PREFIX)}

# endregion
