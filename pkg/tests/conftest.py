import pytest

from surround_tools.config import Settings
from surround_tools.family_tools import complete_bipartite, cycle_graph, path_graph


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run the minutes-long acceptance rows')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: minutes-long acceptance row, needs --runslow')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def settings():
    return Settings(budget=5_000_000, workers=1, seed=0, step_factor=4, chunk=65_536, log_level='INFO')


@pytest.fixture
def star():
    return complete_bipartite(1, 3)


@pytest.fixture
def k33():
    return complete_bipartite(3, 3)


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def p3():
    return path_graph(3)
