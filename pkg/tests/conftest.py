import pytest

RESULTS: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion, then assert."""

    def record(num: int, ok: bool, detail: str = "") -> None:
        line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        print(line)
        RESULTS.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
