import pytest

from acceptance_log import LINES


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])


@pytest.fixture
def report():
    def _report(n: int, ok: bool, detail: str) -> None:
        LINES[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} ({detail})"
        print(LINES[n])

    return _report
