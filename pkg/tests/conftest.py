import pytest

SCENARIOS = {
    "fig2a": ((0.9, 0.8, 0.7, 0.6), 2),
    "fig2b": ((0.9, 0.8, 0.7, 0.6, 0.5), 3),
    "fig2c": ((0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3), 4),
}


@pytest.fixture
def fig2b():
    return SCENARIOS["fig2b"]


ACCEPTANCE_LINES: list[str] = []


def report(criterion: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
