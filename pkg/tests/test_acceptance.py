"""Acceptance gate: one test per headline guarantee of the package.

Each test checks the library against an independent computation: counts
are re-enumerated with standalone walkers, layouts are re-read with the
plain-loop panel reader from conftest, and rewards are recomputed by
hand. The terminal summary prints one PASS/FAIL line per test.
"""

import json
import subprocess
import sys
import time

import numpy as np
from scipy import ndimage

from conftest import D, L, R, U, read_panel_raw, rich_memory

from hopmaze.concept import describe_state
from hopmaze.core import (
    DigitKind,
    Direction,
    HintSymbol,
    Maze,
    Move,
    PanelDescription,
    Position,
    direction_color,
)
from hopmaze.env import (
    Environment,
    TaskParams,
    decode_symbolic,
    encode_symbolic,
    episode_return,
)
from hopmaze.kb import ST1_GOAL_DIR, SUBCATEGORIES, build_kb
from hopmaze.mazegen import (
    GenConfig,
    ProblemSet,
    count_monotone_paths,
    generate_set,
    path_universe_size,
    sample_optimal_path,
    save_problem_set,
    set_statistics,
    validate_path,
)
from hopmaze.metrics import rho_actions, rho_goals, rho_plan
from hopmaze.oracle import run_oracle_episode
from hopmaze.reference import reference_maze
from hopmaze.render import DigitBank, render_panel
from hopmaze.testgen import generate_suite

GOAL_COLOR_NAMES = {"cyan", "blue", "purple", "white"}

DELTAS = {
    Direction.LEFT: (-1, 0),
    Direction.UP: (0, -1),
    Direction.RIGHT: (1, 0),
    Direction.DOWN: (0, 1),
}


def test_path_universe_counts_exactly_738_980_triples():
    """Enumerate every start/goal placement and every monotone staircase
    between them under the documented convention: four rotated frames,
    each holding the first-hop-horizontal / last-hop-vertical staircases
    of every diagonal pair plus every adjacent pair along the first axis.
    """
    started = time.monotonic()

    def staircases(dx, dy):
        # walk every interleaving of the middle moves one by one; the
        # first hop is pinned horizontal and the last vertical
        count = 0
        stack = [(dx - 1, dy - 1)]
        while stack:
            rights, ups = stack.pop()
            if rights == 0 and ups == 0:
                count += 1
                continue
            if rights:
                stack.append((rights - 1, ups))
            if ups:
                stack.append((rights, ups - 1))
        return count

    shapes = {(dx, dy): staircases(dx, dy) for dx in range(1, 10) for dy in range(1, 10)}
    frame = 0
    for sx in range(10):
        for sy in range(10):
            for gx in range(10):
                for gy in range(10):
                    dx, dy = gx - sx, sy - gy
                    if dx >= 1 and dy >= 1:
                        frame += shapes[(dx, dy)]
                    elif (dx, dy) == (1, 0):
                        frame += 1
    assert 4 * frame == 738_980
    assert path_universe_size(10) == 738_980
    assert time.monotonic() - started < 5.0


def test_block_path_counts_match_brute_force():
    def brute(m, n):
        def walk(x, y):
            if (x, y) == (m - 1, n - 1):
                return 1
            total = 0
            if x < m - 1:
                total += walk(x + 1, y)
            if y < n - 1:
                total += walk(x, y + 1)
            return total

        return walk(0, 0)

    started = time.monotonic()
    for m in range(1, 7):
        for n in range(1, 7):
            assert count_monotone_paths(m, n) == brute(m, n)
    assert time.monotonic() - started < 1.0


def test_sampled_paths_always_hop_toward_the_goal():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        path = sample_optimal_path(10, rng)
        goal = path[-1]
        for a, b in zip(path, path[1:]):
            assert abs(b.x - a.x) + abs(b.y - a.y) == 1
            before = abs(goal.x - a.x) + abs(goal.y - a.y)
            after = abs(goal.x - b.x) + abs(goal.y - b.y)
            assert after == before - 1
        assert validate_path(path)


def test_c_shaped_paths_are_rejected():
    rng = np.random.default_rng(99)
    for _ in range(1000):
        m = int(rng.integers(1, 7))
        k = int(rng.integers(1, 6))
        j = int(rng.integers(1, m + 2))
        cells = [(0, 0)]
        for _ in range(m):
            cells.append((cells[-1][0] + 1, cells[-1][1]))
        for _ in range(k):
            cells.append((cells[-1][0], cells[-1][1] + 1))
        for _ in range(j):
            cells.append((cells[-1][0] - 1, cells[-1][1]))
        # a random isometry must not change the verdict
        flip_x, flip_y, swap = rng.integers(0, 2, size=3)
        path = []
        for x, y in cells:
            x = -x if flip_x else x
            y = -y if flip_y else y
            path.append(Position(y, x) if swap else Position(x, y))
        assert not validate_path(tuple(path))


def test_training_sets_balance_colors_and_panel_sizes():
    started = time.monotonic()
    for seed in range(5):
        stats = set_statistics(generate_set(GenConfig(seed=seed), 100))
        dist = [v for k, v in stats["color_counts"].items() if k not in GOAL_COLOR_NAMES]
        goal = [v for k, v in stats["color_counts"].items() if k in GOAL_COLOR_NAMES]
        for group in (dist, goal):
            assert len(group) == 4
            mean = sum(group) / 4
            assert all(abs(v - mean) <= 0.2 * mean for v in group)
        counts = [stats["digit_counts"][str(v)] for v in range(1, 10)]
        assert all(a >= b for a, b in zip(counts, counts[1:]))
        assert stats["share_3_to_6"] >= 0.85
    assert time.monotonic() - started < 30.0


def test_oracle_is_perfect_on_a_full_training_set():
    problems = generate_set(GenConfig(seed=11), 100)
    params = TaskParams(max_opt_len=5, trials_per_episode=10)
    for pid, maze in enumerate(problems.mazes):
        log = run_oracle_episode(Environment(maze, params, problem_id=pid))
        assert rho_actions(log) == 1.0
        assert rho_goals(log) == 1.0


def test_oracle_needs_eight_then_four_moves_on_the_reference_maze():
    params = TaskParams(max_opt_len=5, trials_per_episode=10)
    log = run_oracle_episode(Environment(reference_maze(), params))
    assert [t.length for t in log.trials] == [8] + [4] * 9
    assert all(t.reached_goal for t in log.trials)
    assert rho_plan(log, 4) == 0.95


def test_wall_digits_obey_move_arithmetic():
    problems = generate_set(GenConfig(seed=29), 30).mazes
    panels = {}
    pool = []
    for mid, maze in enumerate(problems):
        for cell in maze.open_cells:
            desc = describe_state(maze, cell)
            panels[(mid, cell)] = desc
            if desc.wall_dist:
                pool.append((mid, cell, desc))
    rng = np.random.default_rng(7)
    violations = []
    for _ in range(100_000):
        mid, cell, desc = pool[int(rng.integers(len(pool)))]
        options = [d for d in Direction if d in desc.wall_dist]
        d = options[int(rng.integers(len(options)))]
        wall = desc.wall_dist[d]
        disp = int(rng.integers(1, wall + 1))
        dx, dy = DELTAS[d]
        landing = Position(cell.x + dx * disp, cell.y + dy * disp)
        got = panels[(mid, landing)].wall_dist.get(d, 0)
        if got != wall - disp:
            violations.append((mid, cell, d, wall, disp, got))
    assert violations == []


def test_symbolic_panels_encode_losslessly():
    rng = np.random.default_rng(13)
    hints = (None, *HintSymbol)
    for _ in range(10_000):
        wall = {}
        crossing = {}
        for d in Direction:
            if rng.random() < 0.7:
                wall[d] = int(rng.integers(1, 10))
                if wall[d] >= 2 and rng.random() < 0.5:
                    crossing[d] = int(rng.integers(1, wall[d]))
        desc = PanelDescription(
            wall_dist=wall,
            crossing_dist=crossing,
            goal_offset=(int(rng.integers(-9, 10)), int(rng.integers(-9, 10))),
            hint=hints[int(rng.integers(len(hints)))],
        )
        arr = encode_symbolic(desc)
        assert arr.shape == (11, 19)
        assert decode_symbolic(arr) == desc


def _scripted_corridor(params):
    path = tuple(Position(x, 0) for x in range(5))
    maze = Maze(
        grid_size=10, open_cells=frozenset(path), start=path[0], goal=path[-1], optimal_path=path
    )
    env = Environment(maze, params)
    env.reset()
    rewards = []
    done = False
    for move in [Move(R, (3,)), Move(U, (1,)), Move(R, (1,))] * params.trials_per_episode:
        _, reward, _, done, _ = env.step(move)
        rewards.append(reward)
    assert done
    return env.log, rewards


def test_reward_table_and_discounted_return():
    params = TaskParams(trials_per_episode=2)
    assert params.gamma == 0.95
    log, rewards = _scripted_corridor(params)
    assert rewards == [3.0, -5.0, 101.0, 3.0, -5.0, 101.0]
    _, unshaped = _scripted_corridor(TaskParams(trials_per_episode=2, shaping_coeff=0.0))
    assert unshaped == [0.0, -5.0, 100.0, 0.0, -5.0, 100.0]
    per_trial = 3.0 + 0.95 * -5.0 + 0.95**2 * 101.0
    assert abs(episode_return(log) - (per_trial + 0.95**3 * per_trial)) < 1e-12


def _goal_digit(offset, name):
    axis, sign = {"left": (0, -1), "up": (1, -1), "right": (0, 1), "down": (1, 1)}[name]
    value = offset[axis] * sign
    return value if value > 0 else None


def test_probe_mazes_isolate_their_digit_pair():
    kb = build_kb(rich_memory())
    suite = generate_suite(kb, rng=np.random.default_rng(3), per_category_target=2)
    assert all(suite[sub] for sub in SUBCATEGORIES)
    opposite = {"left": "right", "right": "left", "up": "down", "down": "up"}
    violations = []
    for sub in SUBCATEGORIES:
        for prob in suite[sub]:
            cand = prob.candidate
            open_cells = {(p.x, p.y) for p in prob.maze.open_cells}
            goal = (prob.maze.goal.x, prob.maze.goal.y)
            probe = (prob.test_cell.x, prob.test_cell.y)
            tested = cand.direction.name.lower()
            hits = set()
            for cell in open_cells:
                wall, crossing, _ = read_panel_raw(open_cells, goal, cell)
                for name in wall:
                    if wall[name] == cand.hi and crossing.get(name) == cand.lo:
                        hits.add((cell, name))
            if (probe, tested) not in hits:
                violations.append((sub, cand, "pair missing at the probe cell"))
            if sub == "ST-1":
                wall, _, offset = read_panel_raw(open_cells, goal, probe)
                companions = (
                    wall.get(opposite[tested]),
                    _goal_digit(offset, ST1_GOAL_DIR[cand.direction].name.lower()),
                )
                if companions != cand.companions:
                    violations.append((sub, cand, f"companions read back as {companions}"))
                seen = kb.quad_seen.get((cand.direction, cand.hi, cand.lo), set())
                if companions in seen:
                    violations.append((sub, cand, "quadruple was already observed"))
            elif hits != {(probe, tested)}:
                violations.append((sub, cand, f"pair leaks to {sorted(hits - {(probe, tested)})}"))
            log = run_oracle_episode(
                Environment(prob.maze, TaskParams(max_opt_len=5, trials_per_episode=3))
            )
            if rho_goals(log) != 1.0:
                violations.append((sub, cand, "oracle failed to reach the goal"))
    assert violations == []


def test_rendered_panels_have_one_component_per_glyph():
    bank = DigitBank.synthetic()
    problems = generate_set(GenConfig(seed=41), 40).mazes
    descs = [
        describe_state(maze, cell) for maze in problems for cell in sorted(maze.open_cells)
    ]
    rng = np.random.default_rng(17)
    eight = np.ones((3, 3), dtype=int)
    for i, pick in enumerate(rng.integers(0, len(descs), size=1000)):
        desc = descs[int(pick)]
        img = render_panel(desc, bank, np.random.default_rng(1000 + i))
        assert img.shape == (128, 128, 3)
        assert np.issubdtype(img.dtype, np.floating)
        assert img.min() >= 0.0 and img.max() <= 1.0
        glyphs = sum(1 for _ in desc.digits()) + (1 if desc.hint is not None else 0)
        _, found = ndimage.label(np.any(img > 0, axis=2), structure=eight)
        assert found == glyphs


def test_unit_scale_rendering_copies_the_exemplar():
    bank = DigitBank.synthetic()
    rgb = np.asarray(direction_color(DigitKind.DISTANCE, R).rgb, dtype=np.float32)
    for value in range(1, 10):
        desc = PanelDescription(
            wall_dist={R: value}, crossing_dist={}, goal_offset=(0, 0), hint=None
        )
        img = render_panel(desc, bank, np.random.default_rng(value), scale_range=(1.0, 1.0))
        replay = np.random.default_rng(value)
        exemplar = bank.sample(value, replay)
        assert replay.uniform(1.0, 1.0) == 1.0
        x = int(replay.integers(0, 101))
        y = int(replay.integers(0, 101))
        expected = (exemplar.astype(np.float32) / 255.0)[:, :, None] * rgb
        assert np.array_equal(img[y : y + 28, x : x + 28], expected)
        outside = img.copy()
        outside[y : y + 28, x : x + 28] = 0
        assert not outside.any()


def test_wire_transcripts_are_byte_identical_across_runs(tmp_path):
    set_path = tmp_path / "reference.jsonl"
    save_problem_set(ProblemSet(config=GenConfig(), mazes=[reference_maze()]), str(set_path))
    params = TaskParams(max_opt_len=5, trials_per_episode=10)
    log = run_oracle_episode(Environment(reference_maze(), params))
    script = [json.dumps({"op": "reset", "problem_id": 0})]
    script += [
        json.dumps(
            {
                "op": "step",
                "direction": s.move.direction.name.lower(),
                "primitives": list(s.move.primitives),
            }
        )
        for s in log.steps
    ]
    script.append(json.dumps({"op": "close"}))
    payload = "\n".join(script) + "\n"
    for extra in ([], ["--visual", "--render-seed", "5"]):
        transcripts = []
        for _ in range(2):
            proc = subprocess.run(
                [
                    sys.executable, "-m", "hopmaze.cli", "serve",
                    "--set", str(set_path), "--max-opt-len", "5", "--trials", "10", *extra,
                ],
                input=payload,
                capture_output=True,
                text=True,
            )
            assert proc.returncode == 0, proc.stderr
            transcripts.append(proc.stdout.encode())
        assert transcripts[0] == transcripts[1]
        lines = transcripts[0].splitlines()
        assert len(lines) == len(log.steps) + 2
        assert json.loads(lines[-1]) == {"closed": True}
        assert json.loads(lines[-2])["episode_done"] is True
