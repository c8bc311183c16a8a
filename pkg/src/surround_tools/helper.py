import hashlib
import json
import logging
import os
import time
from typing import Any, Dict, Optional

# region logging

# functions in helper.py are decoupled from the logger configuration in config.py to avoid circular dependencies
# therefore the functions in this module that log require a logger instance to be passed as parameter


def create_logger(filename: str, name: str, level=10, console_level: Optional[int] = None,
                  log_format='%(asctime)s %(name)-12s %(levelname)-8s %(message)s') -> logging.Logger:
    """
    Creates and configures a logger for both file and console output.

    The file handler writes to ``<filename>.log`` and is overwritten each time the logger is created.
    The console handler uses ``console_level`` (defaults to ``level``), which keeps long solver runs
    readable on the terminal while the file keeps the DEBUG trace.

    :param filename: The filename for the log file. The logger will use this name with a ".log" extension.
    :param name: The name of the logger.
    :param level: The logging level of the logger and the file handler. Default is logging.DEBUG (10).
    :param console_level: The logging level of the console handler. Defaults to ``level``.
    :param log_format: The format for log messages.
    :returns: A configured logging.Logger object ready for logging messages.

    Example Usage:
    logger = create_logger('app', 'my_logger', console_level=logging.INFO)
    logger.info('This is an info message')
    """

    # Creating a logging object
    new_logger = logging.getLogger(name)

    if new_logger.hasHandlers():
        new_logger.handlers.clear()  # Clear existing handlers to avoid duplicates if called multiple times

    new_logger.setLevel(level)
    new_logger.propagate = False

    # Create file handler (log to file)
    log_file = os.path.splitext(filename)[0] + ".log"
    file_handler = logging.FileHandler(log_file, mode='w')

    # Create console handler (log to console)
    console_handler = logging.StreamHandler()

    file_handler.setLevel(level)
    console_handler.setLevel(level if console_level is None else console_level)

    formatter = logging.Formatter(log_format)
    file_handler.setFormatter(formatter)
    console_handler.setFormatter(formatter)

    new_logger.addHandler(file_handler)
    new_logger.addHandler(console_handler)

    return new_logger


def parse_level(value: Any, default: int = logging.DEBUG) -> int:
    """
    Converts a level name ('INFO') or number ('20') into a logging level.

    >>> parse_level('info')
    20
    >>> parse_level('15')
    15
    >>> parse_level(None)
    10
    """
    if value is None or value == '':
        return default
    if isinstance(value, int):
        return value
    text = str(value).strip()
    if text.isdigit():
        return int(text)
    level = logging.getLevelName(text.upper())
    if not isinstance(level, int):
        raise ValueError(f'unknown log level {value!r}')
    return level

# endregion

# region timing


class Stopwatch:
    """
    Context manager measuring wall time with ``time.perf_counter``.

    >>> with Stopwatch() as sw:
    ...     pass
    >>> sw.elapsed >= 0
    True
    """

    def __init__(self):
        self.start = 0.0
        self.elapsed = 0.0

    def __enter__(self) -> 'Stopwatch':
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc) -> None:
        self.elapsed = time.perf_counter() - self.start

# endregion

# region hashing


def config_hash(config: Dict[str, Any]) -> str:
    """
    Returns a short, stable sha256 digest of a JSON-serialisable configuration.

    Keys are sorted so that insertion order never changes the hash.

    >>> config_hash({'a': 1, 'b': 2}) == config_hash({'b': 2, 'a': 1})
    True
    >>> len(config_hash({}))
    16
    """
    payload = json.dumps(config, sort_keys=True, default=str).encode('utf-8')
    return hashlib.sha256(payload).hexdigest()[:16]

# endregion

# region parsing


def parse_seed_range(text: str) -> range:
    """
    Parses a seed specification: a single integer ``'7'`` or an inclusive range ``'0..49'``.

    :raises ValueError: If the text is neither form or the range is empty.

    >>> list(parse_seed_range('3'))
    [3]
    >>> len(parse_seed_range('0..49'))
    50
    """
    text = str(text).strip()
    if '..' in text:
        low, high = text.split('..', 1)
        try:
            low_i, high_i = int(low), int(high)
        except ValueError as e:
            raise ValueError(f'invalid seed range {text!r}') from e
        if high_i < low_i:
            raise ValueError(f'empty seed range {text!r}')
        return range(low_i, high_i + 1)
    try:
        seed = int(text)
    except ValueError as e:
        raise ValueError(f'invalid seed {text!r}') from e
    return range(seed, seed + 1)

# endregion
