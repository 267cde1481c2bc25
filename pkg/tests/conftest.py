from __future__ import annotations

from collections import defaultdict

import pytest

from gva_scenarios.ingest import bundled_fixtures
from gva_scenarios.validate import run_pipeline



@pytest.fixture(scope="session")
def fixtures():
    return bundled_fixtures()


@pytest.fixture(scope="session")
def pipeline(fixtures):
    return run_pipeline(fixtures)



_criteria: dict = defaultdict(lambda: {"title": "", "outcomes": []})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        entry = _criteria[number]
        entry["title"] = title
        entry["outcomes"].append((item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        failed = [name for name, outcome in entry["outcomes"] if outcome != "passed"]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {number}: {status}  {entry['title']} ({len(entry['outcomes'])} checks)"
        if failed:
            line += f"  failing: {', '.join(failed)}"
        terminalreporter.write_line(line)
