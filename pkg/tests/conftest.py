import pytest

from khlee import karoubi

from _support import FIXTURES, load_fixture


@pytest.fixture(autouse=True, scope="session")
def _strict_checks():
    # re-verify absorption p f = f = f p on every Kar morphism built in tests
    old = karoubi.CHECKS
    karoubi.CHECKS = True
    yield
    karoubi.CHECKS = old


@pytest.fixture(params=sorted(FIXTURES), ids=lambda p: p)
def fixture(request):
    return load_fixture(request.param)


# one summary line per acceptance criterion, printed after the run
_CRITERIA: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call":
        return
    n, title = mark.args
    detail = getattr(item, "criterion_detail", "")
    _CRITERIA[n] = (title, "PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status, detail = _CRITERIA[n]
        line = f"criterion {n} [{title}]: {status}"
        terminalreporter.write_line(f"{line}  ({detail})" if detail else line)
