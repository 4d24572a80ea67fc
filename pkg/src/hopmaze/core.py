"""Core vocabulary shared by every other module.

Grid positions, cardinal directions, digit colors, hint symbols, hop moves,
observation panels, and the maze record itself live here. Coordinates follow
screen convention: ``x`` grows to the right, ``y`` grows downward, so ``UP``
is ``(0, -1)`` and ``DOWN`` is ``(0, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

#: Largest magnitude a displayed digit may take.
MAX_DIGIT = 9


class Direction(Enum):
    """The four cardinal directions, ordered left, up, right, down."""

    LEFT = (-1, 0)
    UP = (0, -1)
    RIGHT = (1, 0)
    DOWN = (0, 1)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]

    @property
    def horizontal(self) -> bool:
        return self.value[1] == 0

    def opposite(self) -> Direction:
        return _OPPOSITE[self]


_OPPOSITE = {
    Direction.LEFT: Direction.RIGHT,
    Direction.RIGHT: Direction.LEFT,
    Direction.UP: Direction.DOWN,
    Direction.DOWN: Direction.UP,
}


class Color(Enum):
    """Digit colors with their RGB values in [0, 1]."""

    RED = (1.0, 0.0, 0.0)
    ORANGE = (1.0, 0.5, 0.0)
    YELLOW = (1.0, 1.0, 0.0)
    GREEN = (0.0, 1.0, 0.0)
    CYAN = (0.0, 1.0, 1.0)
    BLUE = (0.0, 0.0, 1.0)
    PURPLE = (0.5, 0.0, 1.0)
    WHITE = (1.0, 1.0, 1.0)

    @property
    def rgb(self) -> tuple[float, float, float]:
        return self.value


class DigitKind(Enum):
    """What a colored digit on a panel measures."""

    DISTANCE = "distance"  # wall or crossing distance along a direction
    GOAL = "goal"  # goal offset component along a direction


_DIGIT_COLORS = {
    (DigitKind.DISTANCE, Direction.LEFT): Color.RED,
    (DigitKind.DISTANCE, Direction.UP): Color.ORANGE,
    (DigitKind.DISTANCE, Direction.RIGHT): Color.YELLOW,
    (DigitKind.DISTANCE, Direction.DOWN): Color.GREEN,
    (DigitKind.GOAL, Direction.LEFT): Color.CYAN,
    (DigitKind.GOAL, Direction.UP): Color.BLUE,
    (DigitKind.GOAL, Direction.RIGHT): Color.PURPLE,
    (DigitKind.GOAL, Direction.DOWN): Color.WHITE,
}

_COLOR_MEANING = {color: key for key, color in _DIGIT_COLORS.items()}


def direction_color(kind: DigitKind, direction: Direction) -> Color:
    """Color of the digit measuring ``kind`` along ``direction`` (a bijection)."""
    return _DIGIT_COLORS[(kind, direction)]


def color_meaning(color: Color) -> tuple[DigitKind, Direction]:
    """Inverse of :func:`direction_color`."""
    return _COLOR_MEANING[color]


class HintSymbol(Enum):
    """Shapes drawn at junctions, each naming one direction."""

    CIRCLE = "circle"
    TRIANGLE = "triangle"
    SQUARE = "square"
    PENTAGON = "pentagon"


_HINT_DIRECTIONS = {
    HintSymbol.CIRCLE: Direction.UP,
    HintSymbol.TRIANGLE: Direction.RIGHT,
    HintSymbol.SQUARE: Direction.LEFT,
    HintSymbol.PENTAGON: Direction.DOWN,
}

_DIRECTION_HINTS = {d: s for s, d in _HINT_DIRECTIONS.items()}


def hint_direction(symbol: HintSymbol) -> Direction:
    """Direction named by a hint symbol (a bijection)."""
    return _HINT_DIRECTIONS[symbol]


def direction_hint(direction: Direction) -> HintSymbol:
    """Inverse of :func:`hint_direction`."""
    return _DIRECTION_HINTS[direction]


@dataclass(frozen=True, order=True)
class Position:
    """A cell on the grid."""

    x: int
    y: int

    def step(self, direction: Direction, units: int = 1) -> Position:
        return Position(self.x + direction.dx * units, self.y + direction.dy * units)

    def manhattan(self, other: Position) -> int:
        return abs(self.x - other.x) + abs(self.y - other.y)

    def neighbors(self) -> tuple[Position, ...]:
        return tuple(self.step(d) for d in Direction)

    def offset_to(self, other: Position) -> tuple[int, int]:
        """Signed (dx, dy) from self to other."""
        return (other.x - self.x, other.y - self.y)


@dataclass(frozen=True)
class Move:
    """One hop: a direction plus a sequence of primitive step sizes.

    Primitives are drawn from {0, 1, 2, 3}. The hop lands ``displacement``
    cells away in one jump; intermediate cells are skipped over, never
    observed. An all-zero primitive sequence is a lawful no-op.
    """

    direction: Direction
    primitives: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "primitives", tuple(self.primitives))
        if not self.primitives:
            raise ValueError("a move needs at least one primitive")
        if any(p not in (0, 1, 2, 3) for p in self.primitives):
            raise ValueError(f"primitives must lie in 0..3, got {self.primitives!r}")

    @property
    def displacement(self) -> int:
        return sum(self.primitives)

    def to_dict(self) -> dict:
        return {
            "direction": self.direction.name.lower(),
            "primitives": list(self.primitives),
        }

    @classmethod
    def from_dict(cls, data: dict) -> Move:
        return cls(Direction[data["direction"].upper()], tuple(data["primitives"]))


@dataclass(frozen=True)
class PanelDescription:
    """Symbolic content of one observation panel.

    Attributes:
        wall_dist: Distance to the wall per direction; zero distances are
            never stored (an absent key means the neighbouring cell is
            closed).
        crossing_dist: Distance to the nearest junction strictly between the
            cell and the wall, per direction. Requires the wall digit to be
            present and is always strictly smaller than it.
        goal_offset: Signed (dx, dy) from the cell to the goal. Zero
            components are not displayed.
        hint: Hint symbol, present exactly when the cell is a junction.
    """

    wall_dist: dict[Direction, int]
    crossing_dist: dict[Direction, int]
    goal_offset: tuple[int, int]
    hint: Optional[HintSymbol] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "wall_dist", dict(self.wall_dist))
        object.__setattr__(self, "crossing_dist", dict(self.crossing_dist))
        object.__setattr__(self, "goal_offset", tuple(self.goal_offset))
        for d, v in self.wall_dist.items():
            if not 1 <= v <= MAX_DIGIT:
                raise ValueError(f"wall distance {v} for {d.name} out of 1..{MAX_DIGIT}")
        for d, v in self.crossing_dist.items():
            if d not in self.wall_dist:
                raise ValueError(f"crossing digit for {d.name} without a wall digit")
            if not 1 <= v < self.wall_dist[d]:
                raise ValueError(
                    f"crossing distance {v} for {d.name} must lie in 1..{self.wall_dist[d] - 1}"
                )
        gx, gy = self.goal_offset
        if abs(gx) > MAX_DIGIT or abs(gy) > MAX_DIGIT:
            raise ValueError(f"goal offset {self.goal_offset} out of +-{MAX_DIGIT}")

    def digits(self) -> Iterator[tuple[int, Color]]:
        """Displayed digits as (value, color) pairs, in a fixed order."""
        for d in Direction:
            if d in self.wall_dist:
                yield self.wall_dist[d], direction_color(DigitKind.DISTANCE, d)
            if d in self.crossing_dist:
                yield self.crossing_dist[d], direction_color(DigitKind.DISTANCE, d)
        gx, gy = self.goal_offset
        if gx:
            d = Direction.RIGHT if gx > 0 else Direction.LEFT
            yield abs(gx), direction_color(DigitKind.GOAL, d)
        if gy:
            d = Direction.DOWN if gy > 0 else Direction.UP
            yield abs(gy), direction_color(DigitKind.GOAL, d)

    @property
    def digit_count(self) -> int:
        return sum(1 for _ in self.digits())

    def to_dict(self) -> dict:
        return {
            "wall": {d.name.lower(): self.wall_dist[d] for d in Direction if d in self.wall_dist},
            "crossing": {
                d.name.lower(): self.crossing_dist[d] for d in Direction if d in self.crossing_dist
            },
            "goal": list(self.goal_offset),
            "hint": self.hint.value if self.hint else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> PanelDescription:
        return cls(
            wall_dist={Direction[k.upper()]: v for k, v in data["wall"].items()},
            crossing_dist={Direction[k.upper()]: v for k, v in data["crossing"].items()},
            goal_offset=tuple(data["goal"]),
            hint=HintSymbol(data["hint"]) if data["hint"] else None,
        )


@dataclass(frozen=True)
class Maze:
    """A maze instance: open cells, endpoints, junction hints, and its
    generating optimal path."""

    grid_size: int
    open_cells: frozenset[Position]
    start: Position
    goal: Position
    hints: dict[Position, Direction] = field(default_factory=dict)
    optimal_path: tuple[Position, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "open_cells", frozenset(self.open_cells))
        object.__setattr__(self, "hints", dict(self.hints))
        object.__setattr__(self, "optimal_path", tuple(self.optimal_path))
        for p in self.open_cells:
            if not self.in_bounds(p):
                raise ValueError(f"open cell {p} outside the {self.grid_size} grid")
        if self.start not in self.open_cells or self.goal not in self.open_cells:
            raise ValueError("start and goal must be open cells")
        if self.optimal_path:
            if self.optimal_path[0] != self.start or self.optimal_path[-1] != self.goal:
                raise ValueError("optimal path must run from start to goal")
            if any(p not in self.open_cells for p in self.optimal_path):
                raise ValueError("optimal path leaves the open cells")

    def in_bounds(self, pos: Position) -> bool:
        return 0 <= pos.x < self.grid_size and 0 <= pos.y < self.grid_size

    def is_open(self, pos: Position) -> bool:
        return pos in self.open_cells

    def open_neighbors(self, pos: Position) -> tuple[Position, ...]:
        return tuple(p for p in pos.neighbors() if p in self.open_cells)

    def is_junction(self, pos: Position) -> bool:
        """A junction is an open cell with at least three open neighbours."""
        return pos in self.open_cells and len(self.open_neighbors(pos)) >= 3

    def to_dict(self) -> dict:
        return {
            "grid_size": self.grid_size,
            "open": [[p.x, p.y] for p in sorted(self.open_cells)],
            "start": [self.start.x, self.start.y],
            "goal": [self.goal.x, self.goal.y],
            "hints": [
                [p.x, p.y, self.hints[p].name.lower()] for p in sorted(self.hints)
            ],
            "path": [[p.x, p.y] for p in self.optimal_path],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Maze:
        return cls(
            grid_size=data["grid_size"],
            open_cells=frozenset(Position(x, y) for x, y in data["open"]),
            start=Position(*data["start"]),
            goal=Position(*data["goal"]),
            hints={Position(x, y): Direction[d.upper()] for x, y, d in data["hints"]},
            optimal_path=tuple(Position(x, y) for x, y in data["path"]),
        )
