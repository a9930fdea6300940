import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(tag, description):
        entry = {"tag": tag, "description": description, "nodeid": request.node.nodeid}
        ACCEPTANCE_LINES.append(entry)
        return entry

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        for entry in ACCEPTANCE_LINES:
            if entry["nodeid"] == item.nodeid:
                entry["passed"] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for entry in sorted(ACCEPTANCE_LINES, key=lambda e: e["tag"]):
        status = "PASS" if entry.get("passed") else "FAIL"
        terminalreporter.write_line(f"[{status}] {entry['tag']}: {entry['description']}")
