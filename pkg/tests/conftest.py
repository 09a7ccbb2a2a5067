import pytest

from multiroot.numerics import PrecisionConfig

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def cfg100():
    return PrecisionConfig(100)


@pytest.fixture
def record():
    """Collect one PASS/FAIL line per acceptance check for the terminal summary."""

    def _record(label, ok, detail=""):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f"  ({detail})" if detail else ""))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
