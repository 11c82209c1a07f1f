import pytest

_VERDICTS = []


@pytest.fixture
def verdict():
    """Record a one-line PASS/FAIL/SKIP for an acceptance criterion."""

    def record(number, name, status, detail):
        line = f"criterion {number} {name}: {status} ({detail})"
        _VERDICTS.append(line)
        print(line)
        return status

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
