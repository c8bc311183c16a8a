import logging

import pytest

from surround_tools.config import Settings
from surround_tools.errors import ConfigError
from surround_tools.helper import Stopwatch, config_hash, parse_level, parse_seed_range


def test_defaults_without_environment():
    s = Settings.resolve(environ={})
    assert s == Settings()
    assert s.as_dict()['budget'] == 200_000_000


def test_layers_in_precedence_order(tmp_path):
    config = tmp_path / 'run.env'
    config.write_text('SURROUND_BUDGET=5000\nSURROUND_SEED=9\n')
    environ = {'SURROUND_BUDGET': '1_000', 'SURROUND_WORKERS': '3', 'OTHER_SEED': '4'}
    s = Settings.resolve({'seed': 11, 'chunk': None}, config_path=str(config), environ=environ)
    assert s.workers == 3       # environment
    assert s.budget == 5000     # file over environment
    assert s.seed == 11         # flags over file
    assert s.chunk == Settings().chunk


def test_environment_underscores_and_strings():
    s = Settings.resolve(environ={'SURROUND_STEP_FACTOR': '6', 'SURROUND_LOG_LEVEL': 'INFO'})
    assert s.step_factor == 6
    assert s.log_level == 'INFO'


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError, match='does not exist'):
        Settings.resolve(config_path=str(tmp_path / 'missing.env'), environ={})
    with pytest.raises(ConfigError, match='not an integer'):
        Settings.resolve(environ={'SURROUND_BUDGET': 'lots'})
    with pytest.raises(ConfigError, match='workers'):
        Settings.resolve({'workers': 0}, environ={})
    with pytest.raises(ConfigError, match='chunk'):
        Settings.resolve({'chunk': 10}, environ={})


def test_parse_seed_range():
    assert list(parse_seed_range('4')) == [4]
    assert list(parse_seed_range(' 2..5 ')) == [2, 3, 4, 5]
    for bad in ('5..2', 'a..b', 'seven'):
        with pytest.raises(ValueError):
            parse_seed_range(bad)


def test_parse_level():
    assert parse_level('warning') == logging.WARNING
    assert parse_level(30) == 30
    assert parse_level('', default=logging.INFO) == logging.INFO
    with pytest.raises(ValueError):
        parse_level('chatty')


def test_config_hash_ignores_key_order():
    a = config_hash({'args': {'k': 3, 'variant': 'vertex'}, 'settings': Settings().as_dict()})
    b = config_hash({'settings': Settings().as_dict(), 'args': {'variant': 'vertex', 'k': 3}})
    assert a == b
    assert a != config_hash({'args': {'k': 4}})


def test_stopwatch_measures():
    with Stopwatch() as sw:
        sum(range(1000))
    assert sw.elapsed >= 0.0
