"""Grounding of panel concepts in maze state.

A panel describes what an agent standing on a cell can see: wall distances,
nearest-crossing distances, the signed goal offset, and a hint when the cell
is a junction. Moves are hops; the agent lands ``displacement`` cells away
without observing anything in between.
"""

from __future__ import annotations

import itertools

from .core import Direction, Maze, Move, PanelDescription, Position, direction_hint


def describe_state(maze: Maze, pos: Position) -> PanelDescription:
    """Panel visible from an open cell.

    Wall distance along a direction is the length of the run of open cells;
    a zero run means the digit is absent. The crossing distance is the
    nearest junction strictly between the cell and the wall, so it is always
    strictly smaller than the wall digit.
    """
    if not maze.is_open(pos):
        raise ValueError(f"{pos} is not an open cell")
    wall: dict[Direction, int] = {}
    crossing: dict[Direction, int] = {}
    for d in Direction:
        run = 0
        cur = pos.step(d)
        while maze.is_open(cur):
            run += 1
            cur = cur.step(d)
        if run:
            wall[d] = run
            for dist in range(1, run):
                if maze.is_junction(pos.step(d, dist)):
                    crossing[d] = dist
                    break
    hint = maze.hints.get(pos)
    return PanelDescription(
        wall_dist=wall,
        crossing_dist=crossing,
        goal_offset=pos.offset_to(maze.goal),
        hint=direction_hint(hint) if hint is not None else None,
    )


def enumerate_moves(max_opt_len: int) -> tuple[Move, ...]:
    """All distinct moves with 1..max_opt_len primitives.

    The ordering is stable and documented: direction in enum order (left,
    up, right, down), then primitive-sequence length, then lexicographic
    over primitive values. Protocol clients rely on this as a flat action
    index, so it must never change.
    """
    if max_opt_len < 1:
        raise ValueError(f"max_opt_len must be >= 1, got {max_opt_len}")
    moves = []
    for direction in Direction:
        for length in range(1, max_opt_len + 1):
            for prims in itertools.product((0, 1, 2, 3), repeat=length):
                moves.append(Move(direction, prims))
    return tuple(moves)


def affordable(desc: PanelDescription, move: Move) -> bool:
    """Whether the panel's wall digit permits the hop.

    Validity is judged on the total displacement, not per primitive: a hop
    may pass over a crossing it never observes. Zero-displacement moves are
    always affordable.
    """
    return move.displacement <= desc.wall_dist.get(move.direction, 0)


def transition(maze: Maze, pos: Position, move: Move) -> tuple[Position, bool]:
    """Apply a hop from ``pos``. Failed hops leave the position unchanged.

    A hop of displacement k is valid iff the k cells it passes over
    (landing cell included) are all open; this is exactly the wall-digit
    test in :func:`affordable`.
    """
    if not maze.is_open(pos):
        raise ValueError(f"{pos} is not an open cell")
    disp = move.displacement
    if disp == 0:
        return pos, True
    if all(maze.is_open(pos.step(move.direction, i)) for i in range(1, disp + 1)):
        return pos.step(move.direction, disp), True
    return pos, False
