"""Shared fixtures: a hand-built transition memory that exercises every
generalization-test unit, and an independently written panel reader used to
cross-check maze layouts without going through the library's own code."""

from __future__ import annotations

import pytest
from hypothesis import settings

from hopmaze import testgen
from hopmaze.core import Direction, Move, PanelDescription
from hopmaze.kb import MemEntry

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

# library classes whose names start with Test are not test containers
testgen.TestInfeasible.__test__ = False
testgen.TestProblem.__test__ = False

L, U, R, D = Direction.LEFT, Direction.UP, Direction.RIGHT, Direction.DOWN


def panel(wall=None, cross=None, goal=(0, 0), hint=None) -> PanelDescription:
    return PanelDescription(
        wall_dist=wall or {}, crossing_dist=cross or {}, goal_offset=goal, hint=hint
    )


def rich_memory() -> list[MemEntry]:
    """Transitions chosen so that, at theta = 3, every one of the seven test
    units has at least one candidate.

    Co-occurrence pairs (5,3), (4,3), (5,4) are planted upward and (8,7),
    (7,6) downward, each panel also carrying the opposite-wall and goal
    digits that seed the quadruple pools. One transition family teaches the
    arithmetic pair (7,4) rightward; four more teach the displacement
    equalities 2 and 1 leftward, 9 upward, and 5 downward. Everything else
    is deliberately left unseen.
    """
    entries: list[MemEntry] = []

    def still(p: PanelDescription, times: int = 1) -> None:
        # a zero-displacement hop contributes its panels and nothing else
        for _ in range(times):
            entries.append(MemEntry(p, Move(L, (0,)), True, p))

    def hop(before, direction, primitives, after, times: int = 1) -> None:
        for _ in range(times):
            entries.append(MemEntry(before, Move(direction, primitives), True, after))

    still(panel({U: 5, D: 2, R: 1}, {U: 3}, (-1, 4)))  # quad (2, 1) for (up, 5, 3)
    still(panel({U: 5, D: 4, R: 2}, {U: 3}, (-3, 2)))  # quad (4, 3)
    still(panel({U: 4, D: 1, L: 2}, {U: 3}, (-2, 1)), times=2)
    still(panel({U: 5, D: 3}, {U: 4}, (-1, 2)), times=2)
    still(panel({D: 8, U: 1}, {D: 7}, (2, 3)), times=2)
    still(panel({D: 7, U: 2}, {D: 6}, (1, 5)), times=2)

    hop(panel({R: 7}, goal=(4, 0)), R, (3,), panel({R: 4}, goal=(1, 0)), times=3)

    hop(panel({L: 2}), L, (2,), panel({R: 2}), times=3)
    hop(panel({L: 1}), L, (1,), panel({R: 1}), times=3)
    hop(panel({U: 9}), U, (3, 3, 3), panel({D: 9}), times=3)
    hop(panel({D: 5}), D, (3, 2), panel({U: 5}), times=3)
    return entries


@pytest.fixture
def memory_fixture() -> list[MemEntry]:
    return rich_memory()


@pytest.fixture(name="panel")
def panel_fixture():
    return panel


def read_panel_raw(open_cells, goal, cell):
    """Read a cell's panel straight off an open-cell set with plain loops.

    Everything is built-in tuples: ``open_cells`` is a set of (x, y), and
    the result is (wall, crossing, goal_offset) keyed by direction name.
    Kept deliberately separate from the library so layout audits do not
    trust the code they audit.
    """
    deltas = {"left": (-1, 0), "up": (0, -1), "right": (1, 0), "down": (0, 1)}

    def degree(c):
        return sum((c[0] + dx, c[1] + dy) in open_cells for dx, dy in deltas.values())

    wall = {}
    crossing = {}
    for name, (dx, dy) in deltas.items():
        x, y = cell
        run = 0
        while (x + dx, y + dy) in open_cells:
            x, y = x + dx, y + dy
            run += 1
        if run:
            wall[name] = run
            for dist in range(1, run):
                if degree((cell[0] + dx * dist, cell[1] + dy * dist)) >= 3:
                    crossing[name] = dist
                    break
    return wall, crossing, (goal[0] - cell[0], goal[1] - cell[1])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" in nodeid and "::" in nodeid:
                rows[nodeid.split("::")[-1]] = outcome
    if not rows:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name in sorted(rows):
        status = "PASS" if rows[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
