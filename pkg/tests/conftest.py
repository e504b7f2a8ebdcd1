import functools

import pytest

from vrx.cli import build_instance


@functools.lru_cache(maxsize=None)
def inst(spec, cutoff=None):
    """Instances are memoized, so build each one once per session."""
    return build_instance(spec, cutoff)


@pytest.fixture(scope="session")
def M10():
    return inst("virasoro:z:1", 10)


@pytest.fixture(scope="session")
def M6():
    return inst("virasoro:z:1", 6)


@pytest.fixture(scope="session")
def Zx():
    return inst("commhs:poly:z:x:deg=12")


@pytest.fixture(scope="session")
def Z30():
    return inst("comm:zmod:30")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
