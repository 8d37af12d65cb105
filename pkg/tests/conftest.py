import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA = {}
_SESSION = {}


def pytest_sessionstart(session):
    _SESSION["start"] = time.perf_counter()


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or "test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    entry = _CRITERIA.setdefault(name, {"outcome": "passed", "duration": 0.0})
    entry["duration"] += report.duration
    if report.failed:
        entry["outcome"] = "failed"
    elif report.skipped and entry["outcome"] == "passed":
        entry["outcome"] = "skipped"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        e = _CRITERIA[name]
        label = name.replace("test_criterion_", "").replace("_", " ")
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[e["outcome"]]
        tr.write_line(f"{status}  criterion {label}  ({e['duration']:.1f} s)")


@pytest.fixture
def stopwatch():
    t = time.perf_counter()
    return lambda: time.perf_counter() - t


@pytest.fixture
def session_elapsed():
    return lambda: time.perf_counter() - _SESSION["start"]
