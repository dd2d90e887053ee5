"""Collects outcomes of tests marked ``criterion`` and prints one line per criterion."""
from collections import defaultdict

import pytest

_RESULTS = defaultdict(list)
_TITLES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    _TITLES[number] = title
    if report.when == "call" or (report.when == "setup" and not report.passed):
        details = [v for k, v in report.user_properties if k == "detail"]
        _RESULTS[number].append((item.name, report.outcome, details))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        checks = _RESULTS[number]
        failed = [name for name, outcome, _ in checks if outcome == "failed"]
        skipped = [name for name, outcome, _ in checks if outcome == "skipped"]
        status = "FAIL" if failed else ("SKIP" if skipped and len(skipped) == len(checks) else "PASS")
        detail = f"{len(checks) - len(failed) - len(skipped)}/{len(checks)} checks"
        if failed:
            detail += "; failed: " + ", ".join(failed)
        tr.write_line(f"criterion {number}: {status}  {_TITLES[number]} ({detail})")
        for _, _, details in checks:
            for text in details:
                tr.write_line(f"    {text}")
