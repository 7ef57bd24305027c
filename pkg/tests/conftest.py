import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def H():
    from nonassoc import builtin
    return builtin("quaternions")


@pytest.fixture(scope="session")
def O():
    from nonassoc import builtin
    return builtin("octonions")


@pytest.fixture(scope="session")
def S():
    from nonassoc import builtin
    return builtin("sedenions")


def pytest_terminal_summary(terminalreporter):
    from _acceptance import summary_lines
    lines = summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
