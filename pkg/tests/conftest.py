import math

import pytest

import abpackets as ab

# Acceptance tests append "[n] PASS/FAIL ..." lines here; they are echoed in
# the terminal summary so they show up even when output is captured.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    def _report(number: int, ok: bool, detail: str) -> bool:
        line = f"[{number}] {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return _report


@pytest.fixture
def narrow_gap():
    """Two-packet geometry: d = 2 pi, a = 0.01 d."""
    d = 2 * math.pi
    a = 0.01 * d
    return d, a, d + 2 * a


@pytest.fixture
def smoothed_two_packet():
    """Builder for edge-smoothed two-packet states on one shared grid."""
    d, a, sigma = 2 * math.pi, 0.01 * 2 * math.pi, 0.05
    grid = ab.Grid.covering(-(d + a), d + a, sigma / 256, margin=5 * sigma)

    def build(alpha):
        return ab.smooth_edges(ab.make_two_packet(d, a, alpha), sigma, grid)
    return build
