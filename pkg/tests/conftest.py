import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    def _record(criterion: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {criterion}  {detail}".rstrip())
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
