from functools import lru_cache

import pytest

from f2quartics.families import FamilyContext
from f2quartics.gf2tower import FieldTower


@lru_cache(maxsize=None)
def tower(q: int) -> FieldTower:
    return FieldTower.for_q(q)


@lru_cache(maxsize=None)
def context(q: int) -> FamilyContext:
    return FamilyContext(tower(q))


@pytest.fixture(scope="session")
def ctx2():
    return context(2)


@pytest.fixture(scope="session")
def ctx4():
    return context(4)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
