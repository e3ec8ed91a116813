import pytest

_LINES: dict[str, str] = {}


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""

    def record(tag: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {tag}: {detail}"
        _LINES[tag] = line
        print(line)
        return ok

    return record


def _order(tag: str):
    head = tag.split()[0]
    num = "".join(ch for ch in head if ch.isdigit())
    return int(num), tag


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for tag in sorted(_LINES, key=_order):
        terminalreporter.write_line(_LINES[tag])
