import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from screenlab.arcgeom import CircularArc, Segment, UNIT_SLIT  # noqa: E402


@pytest.fixture
def slit():
    return UNIT_SLIT


@pytest.fixture
def quarter_arc():
    return CircularArc((0.0, 0.0), 1.0, (math.pi / 4, 3 * math.pi / 4))


@pytest.fixture
def half_circle():
    return CircularArc((0.0, 0.0), 1.0, (0.0, math.pi))


@pytest.fixture
def long_segment():
    return Segment((0.0, 0.0), (2.0, 0.0))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion and assert it."""
    def record(number: int, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
