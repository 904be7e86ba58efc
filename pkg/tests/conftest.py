import pytest

ACCEPTANCE_RESULTS: dict[int, tuple[str, float, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    number, limit = marker.args
    if rep.passed and call.duration >= limit:
        rep.outcome = "failed"
        rep.longrepr = f"criterion {number} took {call.duration:.2f} s, limit {limit} s"
    ACCEPTANCE_RESULTS[number] = ("PASS" if rep.passed else "FAIL", call.duration, limit)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, limit): acceptance criterion with runtime limit in seconds")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        status, took, limit = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  ({took:.2f} s, limit {limit} s)")
