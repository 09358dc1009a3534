import functools

import pytest

from spi.graph import spi

_ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def graph(p, e, nu):
    return spi(p, e, nu)


@pytest.fixture(scope="session")
def G42():
    """Spi(4, 2)"""
    return graph(2, 1, 2)


@pytest.fixture(scope="session")
def G43():
    """Spi(4, 3)"""
    return graph(3, 1, 2)


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
