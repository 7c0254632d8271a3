from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"

_criteria: dict[int, dict] = {}


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def measured(request):
    """Record a measured value next to the criterion's pass/fail line."""
    mark = request.node.get_closest_marker("criterion")

    def record(label: str, value) -> None:
        if mark is None:
            return
        entry = _criteria.setdefault(mark.args[0], {"title": mark.args[1], "passed": True, "tests": [], "values": []})
        entry.setdefault("values", []).append(f"{label}={value}")

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when != "call" and not report.failed:
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, {"title": title, "passed": True, "tests": [], "values": []})
    if report.failed:
        entry["passed"] = False
    if report.when == "call":
        entry["tests"].append((item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["passed"] else "FAIL"
        values = "; ".join(entry.get("values", []))
        line = f"criterion {number:>2}: {status}  {entry['title']}"
        terminalreporter.write_line(f"{line}  [{values}]" if values else line)
