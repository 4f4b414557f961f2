import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from stt.signature import builtin  # noqa: E402

settings.register_profile(
    "kernel", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("kernel")

BUILTINS = ("stlc", "ulc", "comp-lc", "monoid")


@pytest.fixture(scope="session")
def stlc():
    return builtin("stlc")


@pytest.fixture(scope="session")
def monoid():
    return builtin("monoid")


@pytest.fixture(scope="session")
def ulc():
    return builtin("ulc")


@pytest.fixture(scope="session")
def comp():
    return builtin("comp-lc")


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
