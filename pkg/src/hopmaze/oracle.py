"""Reference solver.

The first trial explores: at every cell the solver follows the hint when
one is shown, otherwise the single goal-ward direction with open space,
and commits to the largest hop count no published bound rules out. Once a
trial has reached the goal, the move sequence is merged into a compact
plan that later trials replay verbatim.
"""

from __future__ import annotations

import math
from typing import Optional

from .core import Direction, Maze, Move, PanelDescription, hint_direction
from .env import Environment, EpisodeLog


def _goal_component(desc: PanelDescription, direction: Direction) -> int:
    """Signed progress toward the goal per unit moved in ``direction``."""
    gx, gy = desc.goal_offset
    return gx * direction.dx + gy * direction.dy


def choose_direction(desc: PanelDescription) -> Direction:
    if desc.hint is not None:
        return hint_direction(desc.hint)
    candidates = [
        d
        for d in Direction
        if _goal_component(desc, d) > 0 and desc.wall_dist.get(d, 0) > 0
    ]
    if len(candidates) != 1:
        raise ValueError(
            f"cannot pick a direction: {len(candidates)} goal-ward open directions and no hint"
        )
    return candidates[0]


def _step_budget(desc: PanelDescription, direction: Direction, max_opt_len: int) -> int:
    """How far to commit along ``direction``: stop at the first crossing, at
    the goal line, and at the wall, whichever is nearest."""
    bounds = [desc.wall_dist[direction]]
    if direction in desc.crossing_dist:
        bounds.append(desc.crossing_dist[direction])
    toward = _goal_component(desc, direction)
    if toward > 0:
        bounds.append(toward)
    return min(min(bounds), 3 * max_opt_len)


def _greedy_primitives(units: int) -> tuple[int, ...]:
    threes, rest = divmod(units, 3)
    return (3,) * threes + ((rest,) if rest else ())


def oracle_decide(desc: PanelDescription, max_opt_len: int) -> Move:
    """One exploratory decision from a panel alone."""
    direction = choose_direction(desc)
    units = _step_budget(desc, direction, max_opt_len)
    return Move(direction=direction, primitives=_greedy_primitives(units))


def merge_plan(moves: list[Move], max_opt_len: int) -> list[Move]:
    """Collapse a goal-reaching move sequence into the shortest replay:
    consecutive same-direction moves merge, then each straight run is cut
    into hops of at most ``3 * max_opt_len`` units."""
    runs: list[tuple[Direction, int]] = []
    for move in moves:
        disp = move.displacement
        if disp == 0:
            continue
        if runs and runs[-1][0] is move.direction:
            runs[-1] = (move.direction, runs[-1][1] + disp)
        else:
            runs.append((move.direction, disp))
    plan = []
    cap = 3 * max_opt_len
    for direction, units in runs:
        while units > 0:
            chunk = min(units, cap)
            plan.append(Move(direction=direction, primitives=_greedy_primitives(chunk)))
            units -= chunk
    return plan


def optimal_plan_length(maze: Maze, max_opt_len: int) -> int:
    """Moves needed to walk the optimal path with merged straight runs."""
    path = maze.optimal_path
    total = 0
    i = 0
    while i < len(path) - 1:
        step = (path[i + 1].x - path[i].x, path[i + 1].y - path[i].y)
        j = i
        while j < len(path) - 1 and (path[j + 1].x - path[j].x, path[j + 1].y - path[j].y) == step:
            j += 1
        total += math.ceil((j - i) / (3 * max_opt_len))
        i = j
    return total


def run_oracle_episode(env: Environment) -> EpisodeLog:
    """Drive one full episode; returns the environment's log."""
    max_opt_len = env.params.max_opt_len
    obs = env.reset()
    plan: Optional[list[Move]] = None
    trial_moves: list[Move] = []
    plan_cursor = 0
    episode_done = False
    while not episode_done:
        if plan is None:
            move = oracle_decide(obs["panel"], max_opt_len)
        else:
            move = plan[plan_cursor]
            plan_cursor += 1
        obs, _, trial_done, episode_done, info = env.step(move)
        if not info["valid"]:
            raise RuntimeError(f"oracle made an invalid move: {move}")
        if plan is None:
            trial_moves.append(move)
        if trial_done:
            reached = env.log.trials[-1].reached_goal
            if plan is None and reached:
                plan = merge_plan(trial_moves, max_opt_len)
            trial_moves = []
            plan_cursor = 0
    return env.log
