"""Shared pytest plumbing: the acceptance report.

Acceptance tests carry a `criterion(number, label)` marker; after the run
one PASS/FAIL line per criterion is printed so the gate can be read at a
glance without scanning the full pytest output.
"""

import pytest

_RESULTS: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(number, label): acceptance criterion this test enforces")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, label = marker.args
    entry = _RESULTS.setdefault(number, [label, True])
    if report.when == "call":
        entry[1] = entry[1] and report.passed
    elif report.failed:
        entry[1] = False


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        label, passed = _RESULTS[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {label}")
