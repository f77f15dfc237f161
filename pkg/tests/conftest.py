"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import pytest

_outcomes = {}  # criterion -> all phases passed so far


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    report = outcome.get_result()
    if report.when == "call" or not report.passed:
        crit = marker.args[0]
        _outcomes[crit] = _outcomes.get(crit, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_outcomes):
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if _outcomes[crit] else 'FAIL'}")
