import warnings

import pytest

ACCEPTANCE_LINES: list[str] = []


def record_criterion(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _quiet_degenerate_spectrum():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*near-degenerate.*")
        yield
