"""A small hand-built maze with a fully known optimal trace.

The layout is fixed so its behaviour can be stated exactly: the first
(exploratory) trial takes 8 moves, the merged plan replays in 4 moves at
``max_opt_len = 5``, and a full 10-trial episode scores a plan ratio of
0.95. Handy for demos, golden transcripts, and regression tests.
"""

from __future__ import annotations

from .core import Direction, Maze, Position

_PATH = [
    (0, 3),
    (1, 3),
    (2, 3),
    (3, 3),
    (4, 3),
    (5, 3),
    (5, 4),
    (6, 4),
    (7, 4),
    (7, 5),
]

_BRANCHES = [
    (0, 2),
    (0, 4),
    (2, 2),
    (3, 4),
    (4, 2),
    (5, 5),
    (5, 6),
    (5, 7),
    (6, 5),
    (7, 3),
    (7, 6),
]

_HINTS = {
    (0, 3): Direction.RIGHT,
    (2, 3): Direction.RIGHT,
    (3, 3): Direction.RIGHT,
    (4, 3): Direction.RIGHT,
    (5, 4): Direction.RIGHT,
    (6, 4): Direction.RIGHT,
    (7, 4): Direction.DOWN,
    (5, 5): Direction.UP,  # branch junction, points back at its parent
    (6, 5): Direction.LEFT,
}


def reference_maze() -> Maze:
    path = [Position(x, y) for x, y in _PATH]
    open_cells = frozenset(path) | {Position(x, y) for x, y in _BRANCHES}
    return Maze(
        grid_size=10,
        open_cells=open_cells,
        start=path[0],
        goal=path[-1],
        hints={Position(x, y): d for (x, y), d in _HINTS.items()},
        optimal_path=tuple(path),
    )
