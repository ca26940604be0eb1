import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import pytest  # noqa: E402

from verlinde_kit import build_root_datum  # noqa: E402

ALGEBRAS = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "G2"]
SMALL = ["A1", "A2", "B2", "G2"]


@pytest.fixture(scope="session")
def a1():
    return build_root_datum("A1")


@pytest.fixture(scope="session")
def a2():
    return build_root_datum("A2")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
