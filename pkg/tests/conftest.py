import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one summary line for the acceptance table."""
    def add(number: int, title: str, passed: bool, detail: str, seconds: float):
        status = "PASS" if passed else "FAIL"
        _ACCEPTANCE_LINES.append(f"[{number:>2}] {status}  {title}: {detail}  ({seconds:.1f} s)")
    return add


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s[1:3])):
            terminalreporter.write_line(line)
