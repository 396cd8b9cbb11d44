import pytest

from kusuoka.estimates import bound_scan, rho_direct

TABLE_N = 5


@pytest.fixture(scope="session")
def bound_rows():
    return [bound_scan(n) for n in range(TABLE_N + 1)]


@pytest.fixture(scope="session")
def rho16():
    return rho_direct(16)


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
