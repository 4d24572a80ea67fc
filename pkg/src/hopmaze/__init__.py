"""Hop-move maze environments with concept-grounded observation panels.

The package is organised as a small library:

- :mod:`hopmaze.core` -- positions, directions, colors, hints, moves, panels, mazes
- :mod:`hopmaze.concept` -- panels from maze state, move space, affordance, transition
- :mod:`hopmaze.mazegen` -- path combinatorics, procedural generation, problem sets
- :mod:`hopmaze.env` -- trial/episode machine, rewards, symbolic encoding, logs
- :mod:`hopmaze.oracle` -- scripted solver and optimal plan length
- :mod:`hopmaze.metrics` -- normalized action/goal/plan scores and aggregation
- :mod:`hopmaze.render` -- visual panels from digit exemplars
- :mod:`hopmaze.kb` -- knowledge bases distilled from interaction memory
- :mod:`hopmaze.testgen` -- knowledge-driven out-of-distribution test mazes
- :mod:`hopmaze.proto` / :mod:`hopmaze.cli` -- line protocol and command line
"""

from .core import (
    MAX_DIGIT,
    Color,
    DigitKind,
    Direction,
    HintSymbol,
    Maze,
    Move,
    PanelDescription,
    Position,
    color_meaning,
    direction_color,
    direction_hint,
    hint_direction,
)
from .concept import affordable, describe_state, enumerate_moves, transition

__all__ = [
    "MAX_DIGIT",
    "Color",
    "DigitKind",
    "Direction",
    "HintSymbol",
    "Maze",
    "Move",
    "PanelDescription",
    "Position",
    "color_meaning",
    "direction_color",
    "direction_hint",
    "hint_direction",
    "affordable",
    "describe_state",
    "enumerate_moves",
    "transition",
]
