import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record a one-line verdict for an acceptance criterion."""

    def report(number: int, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        _LINES.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
