import pytest

_RESULTS: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    info = getattr(report, "criterion", None)
    if info is None:
        return
    number, title = info
    entry = _RESULTS.setdefault(number, {"title": title, "ok": True, "n": 0})
    if report.when == "call":
        entry["n"] += 1
    if report.failed:
        entry["ok"] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        report.criterion = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        status = "PASS" if entry["ok"] and entry["n"] else "FAIL"
        unit = "test" if entry["n"] == 1 else "tests"
        terminalreporter.write_line(f"[{status}] criterion {number}: {entry['title']} ({entry['n']} {unit})")
