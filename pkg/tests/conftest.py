"""Shared pytest configuration.

Acceptance tests are marked with ``@pytest.mark.criterion(num, title)``; a
terminal-summary hook prints one PASS/FAIL line per criterion at the end of
the run.
"""

import pytest

_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(num, title): acceptance-criterion metadata for the summary"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        _RESULTS[int(marker.args[0])] = (marker.args[1], report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(_RESULTS):
        title, outcome = _RESULTS[num]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status} - {title}")
