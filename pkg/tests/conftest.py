import pytest

_CRITERION_LINES = []


@pytest.fixture
def criterion():
    """Records one pass/fail line per acceptance criterion.

    The lines are replayed in the terminal summary, outside pytest's
    output capture, so they always appear in the run log.
    """

    def record(name: str, ok: bool, detail: str = ""):
        line = f"criterion {name}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f" ({detail})"
        _CRITERION_LINES.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)
