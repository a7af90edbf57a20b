import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from hflab.qls import QLSDatum, sweedler_datum

settings.register_profile("ci", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def golden_dir():
    return GOLDEN


@pytest.fixture
def sweedler():
    return sweedler_datum()


@pytest.fixture
def taft3():
    return QLSDatum(1, 3, ((1,),))


@pytest.fixture
def klein():
    return QLSDatum(2, 2, ((1, 1), (1, 1)))


def group_only(*orders):
    return QLSDatum.from_json({"mode": "group_only", "orders": list(orders)})


# acceptance criteria append (number, title, passed, seconds, detail) here
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, passed, secs, detail in sorted(ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status} criterion {num:>2} {title} ({secs:.2f}s) {detail}")
