import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key = mark.args
    if rep.when == "call" or rep.skipped or rep.failed:
        status = "SKIP" if rep.skipped else ("FAIL" if rep.failed else "PASS")
        prev = _results.get(key)
        if prev in (None, "PASS"):
            _results[key] = status
        if status == "SKIP" and rep.longrepr:
            _results[key] = f"SKIP ({rep.longrepr[-1]})" if isinstance(rep.longrepr, tuple) else "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), status in sorted(_results.items()):
        terminalreporter.write_line(f"[{status.split()[0]}] criterion {number}: {title}"
                                    + (f" {status[5:]}" if status.startswith("SKIP ") else ""))
