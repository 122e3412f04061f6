import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Record one acceptance line; printed now and again in the terminal summary."""

    def _record(number: int, name: str, passed: bool, detail: str) -> None:
        line = f"[{number:2d}] {'PASS' if passed else 'FAIL'} {name}: {detail}"
        print(line)
        _ACCEPTANCE_LINES.append(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
