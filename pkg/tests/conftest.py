import pytest

ACCEPTANCE_LINES: list = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the test still asserts on its own."""

    def record(number: int, ok: bool, detail: str = ""):
        status = "PASS" if ok else "FAIL"
        ACCEPTANCE_LINES.append((number, f"criterion {number:2d}: {status}  {detail}".rstrip()))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
