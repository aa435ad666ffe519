import os

import pytest
from hypothesis import HealthCheck, settings

from cfsubtype.syntax import parse_type
from helpers import ACCEPTANCE_LINES, S_EMPTY, S_FULL_TREE0, S_FULL_TREE1, S_TREE

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

@pytest.fixture(scope="session")
def trees():
    return {
        "SEmpty": parse_type(S_EMPTY),
        "SFullTree0": parse_type(S_FULL_TREE0),
        "SFullTree1": parse_type(S_FULL_TREE1),
        "STree": parse_type(S_TREE),
    }


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
