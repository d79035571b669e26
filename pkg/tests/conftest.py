"""Shared fixtures plus the acceptance report: one pass/fail line per
criterion, printed in the terminal summary regardless of outcome."""

import pytest

ACCEPTANCE_LINES = []


def record_criterion(number: int, description: str, passed: bool, detail: str = ""):
    status = "PASS" if passed else "FAIL"
    line = f"CRITERION {number:2d} [{status}] {description}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append((number, line))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance():
    return record_criterion
