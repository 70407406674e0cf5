import pytest

from planout.random_ops import SaltContext

# PASS/FAIL lines recorded by the acceptance tests; echoed after the run
# (terminal-summary output is never swallowed by output capture).
acceptance_report_lines = []


@pytest.fixture
def ctx():
    return SaltContext("ns", "exp", "button_color")


def pytest_terminal_summary(terminalreporter):
    if not acceptance_report_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_report_lines:
        terminalreporter.write_line(line)
