import pytest

_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    marker = "test_acceptance.py::test_criterion_"
    if marker not in report.nodeid:
        return
    name = report.nodeid.split(marker, 1)[1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[name] = report.outcome
    if report.when == "teardown" and report.outcome == "failed":
        _CRITERIA[name] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        number, _, title = name.partition("_")
        verdict = "PASS" if _CRITERIA[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  criterion {int(number):2d}: {title.replace('_', ' ')}")


@pytest.fixture
def space():
    """Run the body inside an explicit jet space: ``with space(m=2): ...``."""
    from ncvar import jet_space

    return jet_space
