from functools import lru_cache

import pytest

from nilkilling import catalog
from nilkilling.killing import killing_space
from nilkilling.oracle import OracleSpan

_criteria = {}


@lru_cache(maxsize=None)
def load(name):
    """(algebra, embedded tensors) for a catalog name, via the text format."""
    return catalog.load(name).build()


@lru_cache(maxsize=None)
def killing(name):
    return killing_space(load(name)[0])


@lru_cache(maxsize=None)
def oracle_span(name):
    return OracleSpan(load(name)[0])


@pytest.fixture(params=catalog.VALID_NAMES)
def catalog_name(request):
    return request.param


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    number = getattr(report, "criterion", None)
    if number is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _criteria[number] = _criteria.get(number, True) and report.passed


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status = "PASS" if _criteria[number] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}")
