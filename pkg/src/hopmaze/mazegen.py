"""Procedural maze generation.

A maze starts from a sampled optimal path (a monotone staircase: every unit
move decreases the Manhattan distance to the goal by exactly one), gains
deceptive dead-end branches hanging off the path interior, and gets hint
symbols on its junctions. Sets of mazes are balanced so that panel digits of
every color appear at comparable rates.
"""

from __future__ import annotations

import bisect
import json
from collections import Counter, defaultdict, deque
from dataclasses import asdict, dataclass
from math import comb

import numpy as np

from .core import MAX_DIGIT, Color, DigitKind, Direction, Maze, Position, direction_color

_DIRECTIONS = tuple(Direction)

#: Chance that a growing branch forks into a side shoot instead of extending.
FORK_PROBABILITY = 0.15

#: Independent draws per set slot when balancing colors across a set.
CANDIDATE_DRAWS = 12


@dataclass(frozen=True)
class GenConfig:
    """Knobs for maze generation.

    ``branch_depth_mean`` is the mean of the shifted-geometric depth of
    deceptive branches (2 for the training profile, 5 for tests);
    ``branching_mean`` the Poisson mean of the branch count per maze.
    """

    grid_size: int = 10
    branch_depth_mean: float = 2.0
    branching_mean: float = 5.0
    seed: int = 0


# ---------------------------------------------------------------------------
# path combinatorics


def count_monotone_paths(m: int, n: int) -> int:
    """Monotone staircase paths corner-to-corner of an m x n cell block.

    Every such path takes m - 1 unit moves along one axis and n - 1 along
    the other, in any interleaving: C(m + n - 2, n - 1).
    """
    if m < 1 or n < 1:
        raise ValueError(f"block spans must be >= 1, got {m} x {n}")
    return comb(m + n - 2, n - 1)


def _canonical_classes(grid_size: int) -> list[tuple[int, int, int, int]]:
    """(dx, dy, placements, paths-per-pair) for the canonical quadrant.

    Canonical triples put the goal strictly up-right of the start and use
    staircases whose first hop is horizontal and last is vertical; the
    interior of such a path is a free interleaving of dx - 1 horizontal and
    dy - 1 vertical unit moves.
    """
    classes = []
    for dx in range(1, grid_size):
        for dy in range(1, grid_size):
            placements = (grid_size - dx) * (grid_size - dy)
            classes.append((dx, dy, placements, comb(dx + dy - 2, dy - 1)))
    return classes


def _canonical_total(grid_size: int) -> int:
    diag = sum(p * c for _, _, p, c in _canonical_classes(grid_size))
    adjacent = (grid_size - 1) * grid_size  # right-adjacent pairs, one path each
    return diag + adjacent


def path_universe_size(grid_size: int = 10) -> int:
    """Number of (start, goal, optimal path) triples the sampler can emit.

    The universe is the four rotations of a canonical quadrant: diagonal
    pairs contribute the first-horizontal/last-vertical staircases of their
    offset block, adjacent pairs their single step, and longer straight
    pairs are canonicalized away by the rotation. On the default 10 x 10
    grid this counts 738,980 triples.
    """
    return 4 * _canonical_total(grid_size)


def _unrank_combination(index: int, n: int, k: int) -> tuple[int, ...]:
    """The index-th k-subset of range(n) in lexicographic order."""
    picked = []
    cursor = 0
    for i in range(k):
        c = cursor
        while comb(n - c - 1, k - i - 1) <= index:
            index -= comb(n - c - 1, k - i - 1)
            c += 1
        picked.append(c)
        cursor = c + 1
    return tuple(picked)


def _build_canonical_path(sx: int, sy: int, dx: int, dy: int, path_index: int) -> tuple[Position, ...]:
    """Staircase from (sx, sy) to (sx + dx, sy - dy): first hop right, last hop up."""
    middle = dx + dy - 2
    ups = set(_unrank_combination(path_index, middle, dy - 1)) if middle else set()
    moves = [Direction.RIGHT]
    moves += [Direction.UP if i in ups else Direction.RIGHT for i in range(middle)]
    moves.append(Direction.UP)
    cells = [Position(sx, sy)]
    for mv in moves:
        cells.append(cells[-1].step(mv))
    return tuple(cells)


def _sample_canonical_path(grid_size: int, rng: np.random.Generator) -> tuple[Position, ...]:
    index = int(rng.integers(_canonical_total(grid_size)))
    for dx, dy, placements, per_pair in _canonical_classes(grid_size):
        block = placements * per_pair
        if index < block:
            placement, path_index = divmod(index, per_pair)
            sx, offset = divmod(placement, grid_size - dy)
            sy = dy + offset  # keep the up-right goal inside the grid
            return _build_canonical_path(sx, sy, dx, dy, path_index)
        index -= block
    sx, sy = divmod(index, grid_size)  # right-adjacent pair
    return (Position(sx, sy), Position(sx + 1, sy))


def _rotate_position(p: Position, grid_size: int, quarter_turns: int) -> Position:
    for _ in range(quarter_turns % 4):
        p = Position(grid_size - 1 - p.y, p.x)
    return p


def sample_optimal_path(grid_size: int, rng: np.random.Generator) -> tuple[Position, ...]:
    """Sample one (start, goal, path) triple uniformly from the path universe.

    A canonical triple is drawn uniformly, then the whole grid is rotated by
    a uniform quarter turn so all four directions (and hence digit colors)
    are exercised. The four rotated images are disjoint, so the result is
    uniform over exactly ``path_universe_size(grid_size)`` triples.
    """
    path = _sample_canonical_path(grid_size, rng)
    turns = int(rng.integers(4))
    return tuple(_rotate_position(p, grid_size, turns) for p in path)


def validate_path(path: tuple[Position, ...]) -> bool:
    """True iff consecutive cells are unit-adjacent and every move decreases
    the Manhattan distance to the final cell by exactly one.

    L-shaped paths qualify; C-shaped ones (any move that backtracks toward
    the start side) do not.
    """
    if len(path) < 2:
        return False
    goal = path[-1]
    for a, b in zip(path, path[1:]):
        if a.manhattan(b) != 1:
            return False
        if b.manhattan(goal) != a.manhattan(goal) - 1:
            return False
    return True


# ---------------------------------------------------------------------------
# branches and hints


def _diagonals(p: Position) -> tuple[Position, ...]:
    return (
        Position(p.x - 1, p.y - 1),
        Position(p.x + 1, p.y - 1),
        Position(p.x - 1, p.y + 1),
        Position(p.x + 1, p.y + 1),
    )


def _run_length_through(open_cells: set[Position], cand: Position, horizontal: bool) -> int:
    """Cells the corridor through ``cand`` would span along one axis."""
    step = (1, 0) if horizontal else (0, 1)
    count = 1
    cur = Position(cand.x - step[0], cand.y - step[1])
    while cur in open_cells:
        count += 1
        cur = Position(cur.x - step[0], cur.y - step[1])
    cur = Position(cand.x + step[0], cand.y + step[1])
    while cur in open_cells:
        count += 1
        cur = Position(cur.x + step[0], cur.y + step[1])
    return count


def _branch_cell_ok(
    grid_size: int, open_cells: set[Position], goal: Position, cand: Position, parent: Position
) -> bool:
    if not (0 <= cand.x < grid_size and 0 <= cand.y < grid_size):
        return False
    if cand in open_cells or cand == goal:
        return False
    orth = [n for n in cand.neighbors() if n in open_cells]
    if len(orth) != 1 or orth[0] != parent:
        return False
    # corridors must never merge, not even diagonally, except for the
    # legitimate turn geometry around the parent cell
    parent_orth = set(parent.neighbors())
    for diag in _diagonals(cand):
        if diag in open_cells and diag != parent and diag not in parent_orth:
            return False
    # keep every wall distance displayable as a single digit
    for horizontal in (True, False):
        if _run_length_through(open_cells, cand, horizontal) > MAX_DIGIT + 1:
            return False
    return True


def _grow_branch(
    grid_size: int,
    open_cells: set[Position],
    goal: Position,
    attach: Position,
    depth: int,
    parent_of: dict[Position, Position],
    rng: np.random.Generator,
) -> list[Position]:
    """Grow one dead-end tree of up to ``depth`` cells hanging off ``attach``.

    Cells are opened one by one; a step of budget is forfeited when no legal
    extension exists. Returns the grown cells (possibly empty).
    """
    grown: list[Position] = []
    added: dict[Position, Position] = {}
    tip = attach
    for _ in range(max(depth, 1)):
        if grown and rng.random() < FORK_PROBABILITY:
            base = grown[int(rng.integers(len(grown)))]
        else:
            base = tip
        placed = None
        for i in rng.permutation(4):
            cand = base.step(_DIRECTIONS[i])
            if _branch_cell_ok(grid_size, open_cells, goal, cand, base):
                placed = cand
                break
        if placed is None:
            if not grown:
                return []
            continue
        open_cells.add(placed)
        added[placed] = base
        grown.append(placed)
        if base == tip:
            tip = placed
    parent_of.update(added)
    return grown


def attach_branches(
    path: tuple[Position, ...], cfg: GenConfig, rng: np.random.Generator
) -> tuple[set[Position], dict[Position, Position]]:
    """Attach deceptive branches to the path interior.

    Returns the full open-cell set plus a parent map for every branch cell
    (used for hint placement). The branch count is Poisson with the
    configured mean, clamped to [1, len(path)]; a zero mean yields a bare
    path. Branches never touch the start or goal, never touch the path or
    each other except through their attachment, and may fork into trees.
    """
    open_cells = set(path)
    parent_of: dict[Position, Position] = {}
    interior = list(path[1:-1])
    if cfg.branching_mean <= 0 or not interior:
        return open_cells, parent_of
    count = int(min(max(rng.poisson(cfg.branching_mean), 1), len(path)))
    goal = path[-1]
    mean_depth = max(cfg.branch_depth_mean, 1.0)
    for _ in range(count):
        for _attempt in range(8):
            attach = interior[int(rng.integers(len(interior)))]
            depth = int(rng.geometric(1.0 / mean_depth))
            if _grow_branch(cfg.grid_size, open_cells, goal, attach, depth, parent_of, rng):
                break
    return open_cells, parent_of


def _direction_between(a: Position, b: Position) -> Direction:
    off = a.offset_to(b)
    for d in Direction:
        if (d.dx, d.dy) == off:
            return d
    raise ValueError(f"{a} and {b} are not unit-adjacent")


def place_hints(
    open_cells: set[Position], path: tuple[Position, ...], parent_of: dict[Position, Position]
) -> dict[Position, Direction]:
    """Assign hint directions to every junction (cells with >= 3 open
    neighbours): along the next optimal move on the path, back toward the
    attachment inside a branch."""
    next_move = {a: _direction_between(a, b) for a, b in zip(path, path[1:])}
    hints: dict[Position, Direction] = {}
    for cell in open_cells:
        degree = sum(1 for n in cell.neighbors() if n in open_cells)
        if degree < 3:
            continue
        if cell in next_move:
            hints[cell] = next_move[cell]
        elif cell in parent_of:
            hints[cell] = _direction_between(cell, parent_of[cell])
        else:
            raise ValueError(f"junction {cell} has no hint source")
    return hints


def generate_maze(cfg: GenConfig, rng: np.random.Generator) -> Maze:
    """One maze: sampled optimal path, branches, hints."""
    path = sample_optimal_path(cfg.grid_size, rng)
    open_cells, parent_of = attach_branches(path, cfg, rng)
    hints = place_hints(open_cells, path, parent_of)
    return Maze(
        grid_size=cfg.grid_size,
        open_cells=frozenset(open_cells),
        start=path[0],
        goal=path[-1],
        hints=hints,
        optimal_path=path,
    )


def validate_maze(maze: Maze) -> list[str]:
    """Structural audit; returns a list of problems (empty when sound)."""
    problems = []
    if not validate_path(maze.optimal_path):
        problems.append("optimal path is not a monotone staircase")
    for cell in maze.open_cells:
        is_junction = maze.is_junction(cell)
        if is_junction and cell != maze.goal and cell not in maze.hints:
            problems.append(f"junction {cell} lacks a hint")
        if not is_junction and cell in maze.hints:
            problems.append(f"non-junction {cell} carries a hint")
    if maze.goal in maze.hints:
        problems.append("goal cell carries a hint")
    from .concept import describe_state  # late import; concept depends on core only

    for cell in sorted(maze.open_cells):
        try:
            describe_state(maze, cell)
        except ValueError as err:
            problems.append(f"panel at {cell}: {err}")
    return problems


# ---------------------------------------------------------------------------
# set generation with color balancing


_ROW_COLORS = (Color.RED, Color.YELLOW)  # left, right
_COL_COLORS = (Color.ORANGE, Color.GREEN)  # up, down


def _segments(sorted_values: list[int]) -> list[list[int]]:
    runs: list[list[int]] = []
    for v in sorted_values:
        if runs and v == runs[-1][-1] + 1:
            runs[-1].append(v)
        else:
            runs.append([v])
    return runs


def _axis_histograms(
    cells_by_line: dict[int, list[int]],
    junctions_by_line: dict[int, set[int]],
    low_color: Color,
    high_color: Color,
    dist_colors: Counter,
    digits: Counter,
    per_cell: Counter,
    line_is_row: bool,
) -> None:
    for line, values in cells_by_line.items():
        values.sort()
        junc = junctions_by_line.get(line, set())
        for seg in _segments(values):
            jsorted = sorted(j for j in junc if seg[0] <= j <= seg[-1])
            for v in seg:
                key = (v, line) if line_is_row else (line, v)
                low = v - seg[0]
                high = seg[-1] - v
                if low:
                    dist_colors[low_color] += 1
                    digits[low] += 1
                    per_cell[key] += 1
                    # nearest junction strictly between the cell and the wall
                    i = bisect.bisect_left(jsorted, v) - 1
                    if i >= 0 and jsorted[i] > seg[0]:
                        dist_colors[low_color] += 1
                        digits[v - jsorted[i]] += 1
                        per_cell[key] += 1
                if high:
                    dist_colors[high_color] += 1
                    digits[high] += 1
                    per_cell[key] += 1
                    i = bisect.bisect_right(jsorted, v)
                    if i < len(jsorted) and jsorted[i] < seg[-1]:
                        dist_colors[high_color] += 1
                        digits[jsorted[i] - v] += 1
                        per_cell[key] += 1


def _maze_histograms(maze: Maze) -> tuple[Counter, Counter, Counter, Counter]:
    """(distance-color counts, goal-color counts, digit counts, panel sizes).

    Matches what describe_state would display on every open cell, computed
    per corridor segment so set balancing stays cheap.
    """
    dist_colors: Counter = Counter()
    goal_colors: Counter = Counter()
    digits: Counter = Counter()
    per_cell: Counter = Counter()
    junctions = {p for p in maze.open_cells if maze.is_junction(p)}
    by_row: dict[int, list[int]] = defaultdict(list)
    by_col: dict[int, list[int]] = defaultdict(list)
    junc_by_row: dict[int, set[int]] = defaultdict(set)
    junc_by_col: dict[int, set[int]] = defaultdict(set)
    for p in maze.open_cells:
        by_row[p.y].append(p.x)
        by_col[p.x].append(p.y)
    for p in junctions:
        junc_by_row[p.y].add(p.x)
        junc_by_col[p.x].add(p.y)
    _axis_histograms(by_row, junc_by_row, *_ROW_COLORS, dist_colors, digits, per_cell, True)
    _axis_histograms(by_col, junc_by_col, *_COL_COLORS, dist_colors, digits, per_cell, False)
    for p in maze.open_cells:
        gx, gy = p.offset_to(maze.goal)
        if gx:
            d = Direction.RIGHT if gx > 0 else Direction.LEFT
            goal_colors[direction_color(DigitKind.GOAL, d)] += 1
            digits[abs(gx)] += 1
            per_cell[(p.x, p.y)] += 1
        if gy:
            d = Direction.DOWN if gy > 0 else Direction.UP
            goal_colors[direction_color(DigitKind.GOAL, d)] += 1
            digits[abs(gy)] += 1
            per_cell[(p.x, p.y)] += 1
    sizes: Counter = Counter()
    for p in maze.open_cells:
        sizes[per_cell[(p.x, p.y)]] += 1
    return dist_colors, goal_colors, digits, sizes


def _imbalance(counts: Counter, colors: tuple[Color, ...]) -> float:
    values = [counts.get(c, 0) for c in colors]
    mean = sum(values) / len(values)
    if mean == 0:
        return 0.0
    return (max(values) - min(values)) / mean


def _monotonicity_penalty(digits: Counter) -> float:
    penalty = 0.0
    for v in range(1, MAX_DIGIT):
        lo, hi = digits.get(v, 0), digits.get(v + 1, 0)
        if hi > lo:
            penalty += (hi - lo) / max(hi, 1)
    return penalty


_DIST_GROUP = (Color.RED, Color.ORANGE, Color.YELLOW, Color.GREEN)
_GOAL_GROUP = (Color.CYAN, Color.BLUE, Color.PURPLE, Color.WHITE)


@dataclass
class ProblemSet:
    """A generated collection of mazes plus the config that produced it."""

    config: GenConfig
    mazes: list[Maze]


def generate_set(cfg: GenConfig, count: int, candidates: int = CANDIDATE_DRAWS) -> ProblemSet:
    """Generate ``count`` mazes, balancing panel colors across the set.

    Every slot draws up to ``candidates`` independent mazes and keeps the
    one minimizing the running color-group imbalance (digit monotonicity as
    a tiebreak). Each (slot, draw) pair derives its own seed stream from
    cfg.seed, so results are bit-identical across runs and the slots could
    be generated in parallel.
    """
    if count < 1:
        raise ValueError(f"set size must be >= 1, got {count}")
    mazes: list[Maze] = []
    dist_sum: Counter = Counter()
    goal_sum: Counter = Counter()
    digit_sum: Counter = Counter()
    for slot in range(count):
        best = None
        for draw in range(max(candidates, 1)):
            rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(slot, draw)))
            maze = generate_maze(cfg, rng)
            dist, goal, digits, _ = _maze_histograms(maze)
            score = (
                _imbalance(dist_sum + dist, _DIST_GROUP)
                + _imbalance(goal_sum + goal, _GOAL_GROUP)
                + 0.25 * _monotonicity_penalty(digit_sum + digits)
            )
            if best is None or score < best[0]:
                best = (score, maze, dist, goal, digits)
        _, maze, dist, goal, digits = best
        mazes.append(maze)
        dist_sum += dist
        goal_sum += goal
        digit_sum += digits
    return ProblemSet(config=cfg, mazes=mazes)


def _branch_depths(maze: Maze) -> list[int]:
    """Realized depth (max distance from the attachment) of every branch."""
    branch_cells = set(maze.open_cells) - set(maze.optimal_path)
    seen: set[Position] = set()
    depths = []
    on_path = set(maze.optimal_path)
    for cell in sorted(branch_cells):
        if cell in seen:
            continue
        component = {cell}
        queue = deque([cell])
        while queue:
            cur = queue.popleft()
            for n in cur.neighbors():
                if n in branch_cells and n not in component:
                    component.add(n)
                    queue.append(n)
        seen |= component
        attachments = {
            n for c in component for n in c.neighbors() if n in on_path
        }
        attach = sorted(attachments)[0]
        dist = {attach: 0}
        queue = deque([attach])
        while queue:
            cur = queue.popleft()
            for n in cur.neighbors():
                if n in component and n not in dist:
                    dist[n] = dist[cur] + 1
                    queue.append(n)
        depths.append(max(dist[c] for c in component))
    return depths


def set_statistics(problem_set: ProblemSet) -> dict:
    """Aggregate panel statistics for a problem set.

    Counts every displayed digit of every open cell's panel, grouped by
    color and by digit value, plus the panel-size histogram and realized
    branch counts/depths.
    """
    dist_sum: Counter = Counter()
    goal_sum: Counter = Counter()
    digit_sum: Counter = Counter()
    size_sum: Counter = Counter()
    depth_hist: Counter = Counter()
    branches = 0
    panels = 0
    for maze in problem_set.mazes:
        dist, goal, digits, sizes = _maze_histograms(maze)
        dist_sum += dist
        goal_sum += goal
        digit_sum += digits
        size_sum += sizes
        panels += len(maze.open_cells)
        for depth in _branch_depths(maze):
            depth_hist[depth] += 1
            branches += 1
    in_range = sum(n for size, n in size_sum.items() if 3 <= size <= 6)
    return {
        "mazes": len(problem_set.mazes),
        "panels": panels,
        "color_counts": {c.name.lower(): dist_sum.get(c, 0) for c in _DIST_GROUP}
        | {c.name.lower(): goal_sum.get(c, 0) for c in _GOAL_GROUP},
        "digit_counts": {str(v): digit_sum.get(v, 0) for v in range(1, MAX_DIGIT + 1)},
        "panel_sizes": {str(k): size_sum[k] for k in sorted(size_sum)},
        "share_3_to_6": (in_range / panels) if panels else 0.0,
        "branches": branches,
        "branch_depths": {str(d): depth_hist[d] for d in sorted(depth_hist)},
    }


# ---------------------------------------------------------------------------
# problem-set files


def save_problem_set(problem_set: ProblemSet, path: str) -> None:
    """Write one JSON record per line: a header, then one maze per line."""
    with open(path, "w", encoding="utf-8") as fh:
        header = {
            "kind": "problem_set",
            "config": asdict(problem_set.config),
            "count": len(problem_set.mazes),
        }
        fh.write(json.dumps(header, separators=(",", ":")) + "\n")
        for i, maze in enumerate(problem_set.mazes):
            record = {"kind": "maze", "id": i} | maze.to_dict()
            fh.write(json.dumps(record, separators=(",", ":")) + "\n")


def load_problem_set(path: str) -> ProblemSet:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line]
    if not lines:
        raise ValueError(f"{path}: empty problem-set file")
    header = json.loads(lines[0])
    if header.get("kind") != "problem_set":
        raise ValueError(f"{path}: not a problem-set file")
    cfg = GenConfig(**header["config"])
    mazes = []
    for line in lines[1:]:
        record = json.loads(line)
        if record.get("kind") != "maze":
            raise ValueError(f"{path}: unexpected record kind {record.get('kind')!r}")
        mazes.append(Maze.from_dict(record))
    if len(mazes) != header["count"]:
        raise ValueError(f"{path}: header promises {header['count']} mazes, found {len(mazes)}")
    return ProblemSet(config=cfg, mazes=mazes)
