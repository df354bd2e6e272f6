import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

KBS = Path(__file__).resolve().parent.parent / "kbs"

_criteria: list[str] = []


@pytest.fixture
def kbs():
    return KBS


@pytest.fixture
def report():
    """Record a one-line PASS/FAIL verdict for the acceptance summary."""
    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        _criteria.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_criteria, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
