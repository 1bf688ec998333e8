import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance.append((marker.args[0], marker.args[1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    merged = {}
    for number, title, outcome in _acceptance:
        ok, _ = merged.get(number, (True, title))
        merged[number] = (ok and outcome == "passed", title)
    for number in sorted(merged):
        ok, title = merged[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] AC{number:<2} {title}")
