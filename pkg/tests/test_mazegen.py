"""Maze generation: path combinatorics, sampling uniformity, branches,
hints, set balancing, and the problem-set file format."""

import itertools
from collections import Counter

import numpy as np
import pytest
from scipy import stats as scipy_stats

from hopmaze.concept import describe_state
from hopmaze.core import Direction, Maze, Position
from hopmaze.mazegen import (
    GenConfig,
    ProblemSet,
    count_monotone_paths,
    generate_maze,
    generate_set,
    load_problem_set,
    path_universe_size,
    place_hints,
    sample_optimal_path,
    save_problem_set,
    set_statistics,
    validate_maze,
    validate_path,
)

L, U, R, D = Direction.LEFT, Direction.UP, Direction.RIGHT, Direction.DOWN


# ---------------------------------------------------------------------------
# independent oracles


def brute_force_monotone_paths(m: int, n: int) -> int:
    """Count corner-to-corner monotone paths by walking every one of them."""

    def walk(i, j):
        if (i, j) == (m - 1, n - 1):
            return 1
        total = 0
        if i < m - 1:
            total += walk(i + 1, j)
        if j < n - 1:
            total += walk(i, j + 1)
        return total

    return walk(0, 0)


def rotate(p: Position, grid: int, turns: int) -> Position:
    for _ in range(turns % 4):
        p = Position(grid - 1 - p.y, p.x)
    return p


def canonical_staircases(sx, sy, dx, dy):
    """All paths from (sx, sy) to (sx+dx, sy-dy) whose first hop is right and
    last hop is up, with the middle moves freely interleaved."""
    middle = dx + dy - 2
    for ups in itertools.combinations(range(middle), dy - 1):
        cells = [Position(sx, sy), Position(sx + 1, sy)]
        for i in range(middle):
            step = U if i in ups else R
            cells.append(cells[-1].step(step))
        cells.append(cells[-1].step(U))
        yield tuple(cells)


def enumerate_universe(grid: int) -> set:
    """Every (start, goal, path) triple under the documented inclusion
    convention: canonical up-right staircases and right-adjacent pairs, in
    all four quarter-turn frames."""
    triples = set()
    for turns in range(4):
        for x in range(grid - 1):
            for y in range(grid):
                path = (Position(x, y), Position(x + 1, y))
                triples.add(tuple(rotate(p, grid, turns) for p in path))
        for sx in range(grid):
            for sy in range(grid):
                for gx in range(sx + 1, grid):
                    for gy in range(sy):
                        for path in canonical_staircases(sx, sy, gx - sx, sy - gy):
                            triples.add(tuple(rotate(p, grid, turns) for p in path))
    return triples


def c_shaped_path(rng: np.random.Generator) -> tuple:
    """A path with a deliberate overshoot: right m, up k, then back left j.

    The last leftward leg means some earlier rightward move increased the
    Manhattan distance to the final cell, so these must never validate.
    """
    m = int(rng.integers(2, 8))
    j = int(rng.integers(1, m))
    k = int(rng.integers(1, 6))
    cells = [(i, 0) for i in range(m + 1)]
    cells += [(m, -t) for t in range(1, k + 1)]
    cells += [(m - t, -k) for t in range(1, j + 1)]
    fx, fy = (1, -1)[int(rng.integers(2))], (1, -1)[int(rng.integers(2))]
    swap = bool(rng.integers(2))
    out = []
    for x, y in cells:
        x, y = x * fx, y * fy
        out.append(Position(y, x) if swap else Position(x, y))
    return tuple(out)


# ---------------------------------------------------------------------------
# path combinatorics


class TestPathCounts:
    def test_binomial_formula_matches_brute_force(self):
        for m in range(1, 7):
            for n in range(1, 7):
                assert count_monotone_paths(m, n) == brute_force_monotone_paths(m, n)

    def test_rejects_degenerate_blocks(self):
        with pytest.raises(ValueError):
            count_monotone_paths(0, 3)

    def test_default_universe(self):
        assert path_universe_size() == 738_980

    def test_small_universe_matches_exhaustive_enumeration(self):
        assert path_universe_size(4) == len(enumerate_universe(4)) == 260


class TestSampling:
    def test_sampled_paths_are_monotone_staircases(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            path = sample_optimal_path(10, rng)
            assert validate_path(path)
            assert all(0 <= p.x < 10 and 0 <= p.y < 10 for p in path)

    def test_c_shaped_paths_are_rejected(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            assert not validate_path(c_shaped_path(rng))

    def test_coverage_and_uniformity_on_a_small_grid(self):
        # every triple of the 4x4 universe appears, at a uniform rate
        universe = enumerate_universe(4)
        rng = np.random.default_rng(0)
        counts = Counter(sample_optimal_path(4, rng) for _ in range(26_000))
        assert set(counts) == universe
        result = scipy_stats.chisquare(list(counts.values()))
        assert result.pvalue > 1e-3

    def test_single_cell_paths_never_occur(self):
        rng = np.random.default_rng(13)
        assert all(len(sample_optimal_path(10, rng)) >= 2 for _ in range(100))


class TestValidatePath:
    def test_l_shaped_path_is_valid(self):
        path = (Position(0, 5), Position(1, 5), Position(2, 5), Position(2, 4))
        assert validate_path(path)

    def test_non_adjacent_cells_are_rejected(self):
        assert not validate_path((Position(0, 0), Position(2, 0)))

    def test_too_short_paths_are_rejected(self):
        assert not validate_path((Position(0, 0),))

    def test_revisiting_is_rejected(self):
        path = (Position(0, 0), Position(1, 0), Position(0, 0))
        assert not validate_path(path)


# ---------------------------------------------------------------------------
# whole mazes


class TestGenerateMaze:
    @pytest.mark.parametrize("seed", range(40))
    def test_generated_mazes_audit_clean(self, seed):
        maze = generate_maze(GenConfig(seed=seed), np.random.default_rng(seed))
        assert validate_maze(maze) == []

    @pytest.mark.parametrize("seed", range(10))
    def test_path_junction_hints_point_along_the_path(self, seed):
        maze = generate_maze(GenConfig(seed=seed), np.random.default_rng(seed))
        next_move = {
            a: b for a, b in zip(maze.optimal_path, maze.optimal_path[1:])
        }
        for cell, d in maze.hints.items():
            if cell in next_move:
                assert cell.step(d) == next_move[cell]
            else:
                assert cell.step(d) in maze.open_cells  # back toward the branch

    def test_zero_branching_mean_yields_a_bare_path(self):
        cfg = GenConfig(branching_mean=0.0, seed=5)
        maze = generate_maze(cfg, np.random.default_rng(5))
        assert maze.open_cells == frozenset(maze.optimal_path)

    @pytest.mark.parametrize("seed", range(10))
    def test_branches_never_touch_the_endpoints(self, seed):
        maze = generate_maze(GenConfig(seed=seed), np.random.default_rng(seed))
        off_path = maze.open_cells - set(maze.optimal_path)
        for endpoint in (maze.start, maze.goal):
            assert not any(n in off_path for n in endpoint.neighbors())


class TestPlaceHints:
    def test_path_and_branch_junctions(self):
        path = (Position(0, 1), Position(1, 1), Position(2, 1), Position(3, 1))
        branch = {
            Position(1, 0): Position(1, 1),
            Position(0, 0): Position(1, 0),
            Position(2, 0): Position(1, 0),
        }
        open_cells = set(path) | set(branch)
        hints = place_hints(open_cells, path, branch)
        assert hints == {
            Position(1, 1): R,  # on the path: next optimal move
            Position(2, 1): R,
            Position(1, 0): D,  # in the branch: back toward the attachment
        }

    def test_unsourced_junction_is_an_error(self):
        open_cells = {
            Position(1, 1),
            Position(0, 1),
            Position(2, 1),
            Position(1, 0),
            Position(1, 2),
        }
        with pytest.raises(ValueError, match="no hint source"):
            place_hints(open_cells, (Position(0, 1), Position(1, 1)), {})


# ---------------------------------------------------------------------------
# sets


def recount_with_describe_state(problem_set: ProblemSet):
    """Re-derive the set statistics one panel at a time."""
    colors: Counter = Counter()
    digits: Counter = Counter()
    sizes: Counter = Counter()
    panels = 0
    for maze in problem_set.mazes:
        for cell in maze.open_cells:
            panels += 1
            shown = list(describe_state(maze, cell).digits())
            sizes[len(shown)] += 1
            for value, color in shown:
                colors[color.name.lower()] += 1
                digits[value] += 1
    return colors, digits, sizes, panels


class TestGenerateSet:
    def test_statistics_match_a_panel_by_panel_recount(self):
        ps = generate_set(GenConfig(seed=3), 8)
        stats = set_statistics(ps)
        colors, digits, sizes, panels = recount_with_describe_state(ps)
        assert stats["panels"] == panels
        assert stats["color_counts"] == {
            name: colors.get(name, 0) for name in stats["color_counts"]
        }
        assert stats["digit_counts"] == {
            str(v): digits.get(v, 0) for v in range(1, 10)
        }
        assert stats["panel_sizes"] == {str(k): sizes[k] for k in sorted(sizes)}
        in_range = sum(n for size, n in sizes.items() if 3 <= size <= 6)
        assert stats["share_3_to_6"] == pytest.approx(in_range / panels)

    def test_generation_is_deterministic(self):
        a = generate_set(GenConfig(seed=9), 6)
        b = generate_set(GenConfig(seed=9), 6)
        assert a.mazes == b.mazes

    def test_rejects_empty_sets(self):
        with pytest.raises(ValueError):
            generate_set(GenConfig(), 0)

    def test_mazes_audit_clean(self):
        ps = generate_set(GenConfig(seed=21), 6)
        assert all(validate_maze(m) == [] for m in ps.mazes)


class TestProblemSetFiles:
    def test_round_trip_is_byte_identical(self, tmp_path):
        ps = generate_set(GenConfig(seed=4), 5)
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        save_problem_set(ps, str(first))
        loaded = load_problem_set(str(first))
        assert loaded.mazes == ps.mazes
        assert loaded.config == ps.config
        save_problem_set(loaded, str(second))
        assert first.read_bytes() == second.read_bytes()

    def test_rejects_non_problem_set_files(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"kind": "something_else"}\n')
        with pytest.raises(ValueError, match="not a problem-set file"):
            load_problem_set(str(bad))

    def test_rejects_count_mismatch(self, tmp_path):
        ps = generate_set(GenConfig(seed=4), 2)
        path = tmp_path / "broken.jsonl"
        save_problem_set(ps, str(path))
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-1]) + "\n")
        with pytest.raises(ValueError, match="promises"):
            load_problem_set(str(path))

    def test_rejects_empty_file(self, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        with pytest.raises(ValueError, match="empty"):
            load_problem_set(str(empty))


class TestValidateMaze:
    def test_flags_missing_and_spurious_hints(self):
        path = tuple(Position(x, 1) for x in range(4))
        cells = set(path) | {Position(1, 0)}
        maze = Maze(5, cells, path[0], path[-1], hints={}, optimal_path=path)
        assert any("lacks a hint" in p for p in validate_maze(maze))
        maze = Maze(
            5,
            cells,
            path[0],
            path[-1],
            hints={Position(1, 1): R, Position(2, 1): R},
            optimal_path=path,
        )
        assert any("non-junction" in p for p in validate_maze(maze))

    def test_flags_non_staircase_path(self):
        # a U-turn: the container accepts it, the audit must not
        path = (Position(0, 0), Position(1, 0), Position(1, 1), Position(0, 1))
        maze = Maze(3, set(path), path[0], path[-1], optimal_path=path)
        assert "optimal path is not a monotone staircase" in validate_maze(maze)

    def test_clean_reference(self):
        from hopmaze.reference import reference_maze

        assert validate_maze(reference_maze()) == []
