"""Dynamic generation of generalization-test mazes.

Each problem plants one engineered corridor: from a chosen optimal-path
cell, the tested direction shows a wall at exactly ``hi`` and a crossing
(a junction made by a small side stub) at exactly ``lo``. Everything is
first laid out in a canonical frame with the tested ray pointing right,
then the whole maze is rotated into the requested direction. Deceptive
branches grow with the usual sampler, whose adjacency rules cannot touch
the engineered corridor, and an exhaustive panel scan afterwards rejects
layouts that leak the tested pair anywhere else.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .concept import describe_state
from .core import MAX_DIGIT, Direction, Maze, Position
from .kb import (
    ST1_GOAL_DIR,
    SUBCATEGORIES,
    Candidate,
    KnowledgeBase,
    goal_digit_along,
    query_subcategory,
)
from .mazegen import GenConfig, _grow_branch, _rotate_position, place_hints, validate_maze

log = logging.getLogger(__name__)

_DIRS = tuple(Direction)

TEST_BRANCH_DEPTH_MEAN = 5.0
_LAYOUT_ATTEMPTS = 64


class TestInfeasible(RuntimeError):
    """No valid layout exists (or none was found within the retry budget)."""


@dataclass(frozen=True)
class TestProblem:
    candidate: Candidate
    maze: Maze
    test_cell: Position


def _rotate_direction(d: Direction, quarter_turns: int) -> Direction:
    return _DIRS[(_DIRS.index(d) + quarter_turns) % 4]


def _rotate_maze(maze: Maze, quarter_turns: int) -> Maze:
    if quarter_turns % 4 == 0:
        return maze
    n = maze.grid_size
    rot = lambda p: _rotate_position(p, n, quarter_turns)  # noqa: E731
    return Maze(
        grid_size=n,
        open_cells=frozenset(rot(p) for p in maze.open_cells),
        start=rot(maze.start),
        goal=rot(maze.goal),
        hints={rot(p): _rotate_direction(d, quarter_turns) for p, d in maze.hints.items()},
        optimal_path=tuple(rot(p) for p in maze.optimal_path),
    )


def _pair_leaks(maze: Maze, direction: Direction, hi: int, lo: int, test_cell: Position) -> bool:
    """True when any panel other than the test cell's tested ray shows the
    pair as a same-direction wall/crossing co-occurrence."""
    for cell in maze.open_cells:
        desc = describe_state(maze, cell)
        for d in Direction:
            if desc.wall_dist.get(d) == hi and desc.crossing_dist.get(d) == lo:
                if cell != test_cell or d is not direction:
                    return True
    return False


def _canonical_layout(
    hi: int, lo: int, companions: Optional[tuple[int, int]], cfg: GenConfig, rng
) -> tuple[Maze, Position]:
    """One layout attempt in the canonical frame (tested ray = right)."""
    n = cfg.grid_size
    st1 = companions is not None
    v3, v4 = companions if st1 else (0, 0)

    if st1:
        tx_min = v3
    elif lo == 1 and hi == 2:
        tx_min = 2
    elif hi == 2 * lo:
        tx_min = 1
    else:
        tx_min = 0
    tx = int(rng.integers(tx_min, n - hi))
    ty = int(rng.integers(v4, n - 1)) if st1 else int(rng.integers(1, n - 1))
    test = Position(tx, ty)

    up_run = v4 if st1 else int(rng.integers(1, min(ty, MAX_DIGIT - 1) + 1))
    if st1 or up_run < 2:
        top_run = 0
    else:
        top_run = int(rng.integers(0, min(n - tx, MAX_DIGIT + 1)))
    guard = 0
    if lo == 1:
        # crossing right next to the test cell: the stub can only form a
        # junction if the column below the test cell stays closed, so the
        # path enters horizontally and turns upward at the test cell
        if st1:
            left_run = v3
        else:
            # approach lengths that mirror the pair onto the junction (hi - 1)
            # or, for hi == 2, onto the corridor end (0 and 1) never verify
            floor = 2 if hi == 2 else 0
            options = [c for c in range(floor, min(tx, MAX_DIGIT - hi) + 1) if c != hi - 1]
            left_run = options[int(rng.integers(len(options)))]
        if left_run == 0:
            top_run = 0  # a bare corner start carries no hint, so the goal must sit straight up
        path = [Position(x, ty) for x in range(tx - left_run, tx + 1)]
        path += [Position(tx, y) for y in range(ty - 1, ty - up_run - 1, -1)]
    else:
        if not st1 and hi == 2 * lo:
            # with nothing behind the test cell the corridor end reads the
            # tested pair back in mirror (wall hi, nearest junction hi - lo)
            guard = int(rng.integers(1, min(tx, MAX_DIGIT - hi) + 1))
        ty0 = int(rng.integers(ty + 1, min(n - 1, ty - up_run + MAX_DIGIT) + 1))
        left_run = int(rng.integers(0, min(tx, MAX_DIGIT) + 1))
        if (st1 or guard) and ty0 == ty + 1:
            left_run = 0  # keep the dead corridor's neighbourhood closed
        path = [Position(x, ty0) for x in range(tx - left_run, tx)]
        path += [Position(tx, y) for y in range(ty0, ty - up_run - 1, -1)]
    path += [Position(x, ty - up_run) for x in range(tx + 1, tx + top_run + 1)]
    path = tuple(path)
    start, goal = path[0], path[-1]

    open_cells = set(path)
    parent_of: dict[Position, Position] = {}

    corridor = [Position(tx + j, ty) for j in range(1, hi + 1)]
    for prev, cell in zip([test] + corridor, corridor):
        open_cells.add(cell)
        parent_of[cell] = prev
    junction = corridor[lo - 1]

    depth = int(rng.geometric(1.0 / max(cfg.branch_depth_mean, 1.0)))
    depth = min(depth, n - 1 - ty, MAX_DIGIT)
    stub_parent = junction
    for t in range(1, depth + 1):
        cell = Position(junction.x, ty + t)
        if any(nb in open_cells for nb in cell.neighbors() if nb != stub_parent):
            break
        open_cells.add(cell)
        parent_of[cell] = stub_parent
        stub_parent = cell

    dead = v3 if st1 and lo != 1 else guard
    if dead:
        left = [Position(tx - j, ty) for j in range(1, dead + 1)]
        for prev, cell in zip([test] + left, left):
            open_cells.add(cell)
            parent_of[cell] = prev

    # deceptive branches via the standard sampler; its one-neighbour rule
    # keeps everything clear of the engineered corridors
    interior = path[1:-1]
    if cfg.branching_mean > 0 and interior:
        count = int(min(max(rng.poisson(cfg.branching_mean), 1), len(path)))
        mean_depth = max(cfg.branch_depth_mean, 1.0)
        for _ in range(count):
            for _attempt in range(8):
                attach = interior[int(rng.integers(len(interior)))]
                want = int(rng.geometric(1.0 / mean_depth))
                if _grow_branch(n, open_cells, goal, attach, want, parent_of, rng):
                    break

    hints = place_hints(open_cells, path, parent_of)
    maze = Maze(
        grid_size=n,
        open_cells=frozenset(open_cells),
        start=start,
        goal=goal,
        hints=hints,
        optimal_path=path,
    )
    return maze, test


def build_problem(
    candidate: Candidate, cfg: Optional[GenConfig] = None, rng=None
) -> TestProblem:
    """Build one test problem; raises :class:`TestInfeasible` when the pair
    cannot be planted (grid too small or every layout leaked the pair)."""
    if cfg is None:
        cfg = GenConfig(branch_depth_mean=TEST_BRANCH_DEPTH_MEAN)
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    hi, lo = candidate.hi, candidate.lo
    if not (1 <= lo < hi <= MAX_DIGIT):
        raise ValueError(f"pair ({hi}, {lo}) is not a digit inequality")
    n = cfg.grid_size
    st1 = candidate.category == "ST-1"
    if st1:
        v3, v4 = candidate.companions
        if v3 + hi > MAX_DIGIT:
            raise TestInfeasible(
                f"companion wall {v3} and tested wall {hi} would share a run over {MAX_DIGIT}"
            )
        if v4 > n - 2:
            raise TestInfeasible(f"goal companion {v4} does not fit a grid of {n}")
        if v3 >= n - hi:
            raise TestInfeasible("companion corridor does not fit beside the tested one")
    if hi >= n:
        raise TestInfeasible(f"tested wall {hi} does not fit a grid of {n}")

    turns = (_DIRS.index(candidate.direction) - _DIRS.index(Direction.RIGHT)) % 4
    for _attempt in range(_LAYOUT_ATTEMPTS):
        canonical, test = _canonical_layout(
            hi, lo, candidate.companions if st1 else None, cfg, rng
        )
        maze = _rotate_maze(canonical, turns)
        test_cell = _rotate_position(test, n, turns)
        if validate_maze(maze):
            continue
        desc = describe_state(maze, test_cell)
        if (
            desc.wall_dist.get(candidate.direction) != hi
            or desc.crossing_dist.get(candidate.direction) != lo
        ):
            continue
        if st1:
            opp = candidate.direction.opposite()
            if desc.wall_dist.get(opp) != v3:
                continue
            if goal_digit_along(desc, ST1_GOAL_DIR[candidate.direction]) != v4:
                continue
        elif _pair_leaks(maze, candidate.direction, hi, lo, test_cell):
            continue
        return TestProblem(candidate=candidate, maze=maze, test_cell=test_cell)
    raise TestInfeasible(
        f"no leak-free layout for ({hi}, {lo} | {candidate.direction.name.lower()}) "
        f"after {_LAYOUT_ATTEMPTS} attempts"
    )


def build_test_problem(
    pair: Union[Candidate, tuple],
    category: Optional[str] = None,
    cfg: Optional[GenConfig] = None,
    rng=None,
) -> Maze:
    """Spec-shaped wrapper around :func:`build_problem`: accepts a bare
    ``(direction, hi, lo)`` pair plus a category, returns just the maze."""
    if isinstance(pair, Candidate):
        candidate = pair
        if category is not None and category != candidate.category:
            raise ValueError(f"candidate is {candidate.category}, not {category}")
    else:
        direction, hi, lo = pair
        candidate = Candidate(category or "ST-2", direction, hi, lo)
    return build_problem(candidate, cfg, rng).maze


def generate_suite(
    kb: KnowledgeBase,
    cfg: Optional[GenConfig] = None,
    rng=None,
    per_category_target: int = 150,
) -> dict[str, list[TestProblem]]:
    """Up to ``per_category_target`` problems for each of the seven test
    units; units whose queries come up empty stay empty."""
    if cfg is None:
        cfg = GenConfig(branch_depth_mean=TEST_BRANCH_DEPTH_MEAN)
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    suite: dict[str, list[TestProblem]] = {}
    for sub in SUBCATEGORIES:
        candidates = query_subcategory(kb, sub)
        problems: list[TestProblem] = []
        for idx in rng.permutation(len(candidates)):
            if len(problems) >= per_category_target:
                break
            candidate = candidates[int(idx)]
            try:
                problems.append(build_problem(candidate, cfg, rng))
            except TestInfeasible as err:
                log.debug("skipping %s candidate %s: %s", sub, candidate, err)
        suite[sub] = problems
    return suite


def save_suite(path: str, suite: dict[str, list[TestProblem]]) -> None:
    """Audit-friendly line format: category and provoking pair per problem."""
    with open(path, "w", encoding="utf-8") as fh:
        header = {
            "kind": "test_suite",
            "counts": {sub: len(suite.get(sub, [])) for sub in SUBCATEGORIES},
        }
        fh.write(json.dumps(header, separators=(",", ":")) + "\n")
        for sub in SUBCATEGORIES:
            for problem in suite.get(sub, []):
                row = {
                    "kind": "test_problem",
                    "category": problem.candidate.category,
                    "direction": problem.candidate.direction.name.lower(),
                    "hi": problem.candidate.hi,
                    "lo": problem.candidate.lo,
                    "companions": list(problem.candidate.companions)
                    if problem.candidate.companions
                    else None,
                    "test_cell": [problem.test_cell.x, problem.test_cell.y],
                    "maze": problem.maze.to_dict(),
                }
                fh.write(json.dumps(row, separators=(",", ":")) + "\n")


def load_suite(path: str) -> dict[str, list[TestProblem]]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if not lines or lines[0].get("kind") != "test_suite":
        raise ValueError("suite file must start with a test_suite header")
    suite: dict[str, list[TestProblem]] = {sub: [] for sub in SUBCATEGORIES}
    for row in lines[1:]:
        if row.get("kind") != "test_problem":
            raise ValueError(f"unexpected record kind {row.get('kind')!r} in suite file")
        candidate = Candidate(
            category=row["category"],
            direction=Direction[row["direction"].upper()],
            hi=row["hi"],
            lo=row["lo"],
            companions=tuple(row["companions"]) if row["companions"] else None,
        )
        suite[row["category"]].append(
            TestProblem(
                candidate=candidate,
                maze=Maze.from_dict(row["maze"]),
                test_cell=Position(*row["test_cell"]),
            )
        )
    return suite
