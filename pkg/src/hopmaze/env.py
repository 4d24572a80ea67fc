"""Interactive environment: the trial/episode machine and observation codecs.

An episode runs up to ``trials_per_episode`` trials on one maze; each trial
starts at the maze start and ends on the goal or after ``max_trial_steps``
moves. The whole episode is additionally capped at ``max_episode_steps``
moves. Rewards combine Manhattan-distance shaping, a penalty for invalid
moves (which leave the agent in place), and a terminal goal bonus.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .concept import describe_state, transition
from .core import Direction, HintSymbol, Maze, Move, PanelDescription

_HINT_ORDER = tuple(HintSymbol)

#: Symbolic observation geometry: 11 slots, 19 categories each.
SYMBOLIC_SLOTS = 11
SYMBOLIC_CATEGORIES = 19


@dataclass(frozen=True)
class TaskParams:
    """Episode-level task parameters."""

    max_opt_len: int = 5
    trials_per_episode: int = 10
    max_trial_steps: int = 200
    max_episode_steps: int = 500
    gamma: float = 0.95
    goal_reward: float = 100.0
    invalid_penalty: float = -5.0
    shaping_coeff: float = 1.0

    def __post_init__(self) -> None:
        if self.max_opt_len not in (1, 3, 5):
            raise ValueError(f"max_opt_len must be one of 1, 3, 5; got {self.max_opt_len}")
        if self.trials_per_episode < 1 or self.max_trial_steps < 1 or self.max_episode_steps < 1:
            raise ValueError("trial and step limits must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> TaskParams:
        return cls(**data)


@dataclass
class StepRecord:
    """One logged transition."""

    trial: int
    before: PanelDescription
    move: Move
    valid: bool
    reward: float
    after: PanelDescription

    def to_dict(self) -> dict:
        return {
            "kind": "step",
            "trial": self.trial,
            "before": self.before.to_dict(),
            "move": self.move.to_dict(),
            "valid": self.valid,
            "reward": self.reward,
            "after": self.after.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> StepRecord:
        return cls(
            trial=data["trial"],
            before=PanelDescription.from_dict(data["before"]),
            move=Move.from_dict(data["move"]),
            valid=data["valid"],
            reward=data["reward"],
            after=PanelDescription.from_dict(data["after"]),
        )


@dataclass
class TrialSummary:
    length: int
    reached_goal: bool

    def to_dict(self) -> dict:
        return {"kind": "trial", "length": self.length, "reached_goal": self.reached_goal}

    @classmethod
    def from_dict(cls, data: dict) -> TrialSummary:
        return cls(length=data["length"], reached_goal=data["reached_goal"])


@dataclass
class EpisodeLog:
    """Everything that happened in one episode, in order."""

    problem_id: int
    params: TaskParams
    steps: list[StepRecord] = field(default_factory=list)
    trials: list[TrialSummary] = field(default_factory=list)

    def to_lines(self) -> list[str]:
        """Line-delimited form: a header, then steps and trial summaries in
        chronological order."""
        lines = [
            json.dumps(
                {"kind": "episode", "problem_id": self.problem_id, "params": self.params.to_dict()},
                separators=(",", ":"),
            )
        ]
        per_trial: dict[int, list[StepRecord]] = {}
        for step in self.steps:
            per_trial.setdefault(step.trial, []).append(step)
        for i, summary in enumerate(self.trials):
            for step in per_trial.get(i, []):
                lines.append(json.dumps(step.to_dict(), separators=(",", ":")))
            lines.append(json.dumps(summary.to_dict(), separators=(",", ":")))
        for i in sorted(per_trial):
            if i >= len(self.trials):  # trailing steps of an unfinished trial
                for step in per_trial[i]:
                    lines.append(json.dumps(step.to_dict(), separators=(",", ":")))
        return lines

    @classmethod
    def from_lines(cls, lines: list[str]) -> EpisodeLog:
        records = [json.loads(line) for line in lines if line.strip()]
        if not records or records[0].get("kind") != "episode":
            raise ValueError("episode log must start with an episode header")
        header = records[0]
        log = cls(problem_id=header["problem_id"], params=TaskParams.from_dict(header["params"]))
        for record in records[1:]:
            kind = record.get("kind")
            if kind == "step":
                log.steps.append(StepRecord.from_dict(record))
            elif kind == "trial":
                log.trials.append(TrialSummary.from_dict(record))
            else:
                raise ValueError(f"unexpected record kind {kind!r} in episode log")
        return log

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.to_lines()) + "\n")

    @classmethod
    def load(cls, path: str) -> EpisodeLog:
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_lines(fh.read().splitlines())


def episode_return(log: EpisodeLog, gamma: Optional[float] = None) -> float:
    """Discounted episode return.

    Within a trial rewards discount as gamma**t; each completed trial
    shifts the discount of the next by gamma**(steps consumed so far), so
    the whole episode reads as one discounted stream that resets position
    but not time.
    """
    g = log.params.gamma if gamma is None else gamma
    per_trial: dict[int, list[StepRecord]] = {}
    for step in log.steps:
        per_trial.setdefault(step.trial, []).append(step)
    total = 0.0
    elapsed = 0
    for i in sorted(per_trial):
        inner = 0.0
        for t, step in enumerate(per_trial[i]):
            inner += (g**t) * step.reward
        total += (g**elapsed) * inner
        elapsed += len(per_trial[i])
    return total


# ---------------------------------------------------------------------------
# symbolic observation codec


def encode_symbolic(desc: PanelDescription, index_augment: bool = False) -> np.ndarray:
    """Encode a panel as an 11 x 19 stack of one-hot rows.

    Slots 0-3 hold wall digits (left, up, right, down), 4-7 the crossing
    digits, 8-9 the signed goal offsets, 10 the hint. Every numeric slot
    one-hots its value at column value + 9; absent entries stay all-zero.
    With ``index_augment`` a length-11 slot-index one-hot is appended to
    every row.
    """
    arr = np.zeros((SYMBOLIC_SLOTS, SYMBOLIC_CATEGORIES), dtype=np.float32)
    for i, d in enumerate(Direction):
        if d in desc.wall_dist:
            arr[i, desc.wall_dist[d] + 9] = 1.0
        if d in desc.crossing_dist:
            arr[4 + i, desc.crossing_dist[d] + 9] = 1.0
    gx, gy = desc.goal_offset
    if gx:
        arr[8, gx + 9] = 1.0
    if gy:
        arr[9, gy + 9] = 1.0
    if desc.hint is not None:
        arr[10, _HINT_ORDER.index(desc.hint)] = 1.0
    if index_augment:
        arr = np.concatenate([arr, np.eye(SYMBOLIC_SLOTS, dtype=np.float32)], axis=1)
    return arr


def decode_symbolic(arr: np.ndarray) -> PanelDescription:
    """Invert :func:`encode_symbolic` (augmented input accepted)."""
    if arr.shape == (SYMBOLIC_SLOTS, SYMBOLIC_CATEGORIES + SYMBOLIC_SLOTS):
        arr = arr[:, :SYMBOLIC_CATEGORIES]
    if arr.shape != (SYMBOLIC_SLOTS, SYMBOLIC_CATEGORIES):
        raise ValueError(f"expected an {SYMBOLIC_SLOTS} x {SYMBOLIC_CATEGORIES} panel, got {arr.shape}")
    wall: dict[Direction, int] = {}
    crossing: dict[Direction, int] = {}
    goal = [0, 0]
    hint = None
    for row in range(SYMBOLIC_SLOTS):
        hot = np.flatnonzero(arr[row])
        if hot.size == 0:
            continue
        if hot.size > 1:
            raise ValueError(f"slot {row} is not one-hot")
        col = int(hot[0])
        if row < 4:
            wall[_DIR_AT[row]] = col - 9
        elif row < 8:
            crossing[_DIR_AT[row - 4]] = col - 9
        elif row == 8:
            goal[0] = col - 9
        elif row == 9:
            goal[1] = col - 9
        else:
            if col >= len(_HINT_ORDER):
                raise ValueError(f"hint slot uses category {col}, outside the first 4")
            hint = _HINT_ORDER[col]
    return PanelDescription(
        wall_dist=wall, crossing_dist=crossing, goal_offset=(goal[0], goal[1]), hint=hint
    )


_DIR_AT = tuple(Direction)


# ---------------------------------------------------------------------------
# the environment


class Environment:
    """Trial/episode machine over one maze.

    Observations are dicts with a ``panel`` (the symbolic description) and
    its ``symbolic`` encoding; a ``visual`` 128 x 128 x 3 panel is added
    when a digit bank is supplied.
    """

    def __init__(
        self,
        maze: Maze,
        params: TaskParams = TaskParams(),
        problem_id: int = 0,
        digit_bank=None,
        index_augment: bool = False,
        render_seed: int = 0,
        heldout_digits: bool = False,
    ):
        self.maze = maze
        self.params = params
        self.problem_id = problem_id
        self.index_augment = index_augment
        self._bank = digit_bank
        self._render_seed = render_seed
        self._heldout = heldout_digits
        self._pos = maze.start
        self._trial = 0
        self._trial_steps = 0
        self._episode_steps = 0
        self._done = True  # require reset() before step()
        self.log = EpisodeLog(problem_id=problem_id, params=params)

    @property
    def position(self):
        """Current cell; for diagnostics only, not part of the observation."""
        return self._pos

    @property
    def trial_index(self) -> int:
        return self._trial

    @property
    def episode_done(self) -> bool:
        return self._done

    def _observe(self) -> dict:
        desc = describe_state(self.maze, self._pos)
        obs = {"panel": desc, "symbolic": encode_symbolic(desc, self.index_augment)}
        if self._bank is not None:
            from .render import render_panel  # local import keeps render optional

            rng = np.random.default_rng(
                np.random.SeedSequence(self._render_seed, spawn_key=(self._episode_steps,))
            )
            obs["visual"] = render_panel(desc, self._bank, rng, heldout=self._heldout)
        return obs

    def reset(self) -> dict:
        self._pos = self.maze.start
        self._trial = 0
        self._trial_steps = 0
        self._episode_steps = 0
        self._done = False
        self.log = EpisodeLog(problem_id=self.problem_id, params=self.params)
        return self._observe()

    def step(self, move: Move) -> tuple[dict, float, bool, bool, dict]:
        """Apply one move; returns (obs, reward, trial_done, episode_done, info).

        After a trial ends the returned observation is already the respawned
        start-of-trial view.
        """
        if self._done:
            raise RuntimeError("episode is over; call reset() first")
        if len(move.primitives) > self.params.max_opt_len:
            raise ValueError(
                f"move has {len(move.primitives)} primitives, limit is {self.params.max_opt_len}"
            )
        step_trial = self._trial
        before = describe_state(self.maze, self._pos)
        new_pos, valid = transition(self.maze, self._pos, move)
        shaping = self.params.shaping_coeff * (
            self._pos.manhattan(self.maze.goal) - new_pos.manhattan(self.maze.goal)
        )
        reward = shaping
        if not valid:
            reward += self.params.invalid_penalty
        reached = new_pos == self.maze.goal
        if reached:
            reward += self.params.goal_reward
        after = describe_state(self.maze, new_pos)
        self._trial_steps += 1
        self._episode_steps += 1
        self.log.steps.append(
            StepRecord(
                trial=step_trial,
                before=before,
                move=move,
                valid=valid,
                reward=reward,
                after=after,
            )
        )
        trial_done = reached or self._trial_steps >= self.params.max_trial_steps
        if trial_done:
            self.log.trials.append(TrialSummary(length=self._trial_steps, reached_goal=reached))
            self._trial += 1
            self._trial_steps = 0
            self._pos = self.maze.start
            if self._trial >= self.params.trials_per_episode:
                self._done = True
        else:
            self._pos = new_pos
        if not self._done and self._episode_steps >= self.params.max_episode_steps:
            if not trial_done:  # truncated mid-trial: close it as failed
                self.log.trials.append(
                    TrialSummary(length=self._trial_steps, reached_goal=False)
                )
            self._done = True
        info = {"valid": valid, "trial_index": step_trial}
        return self._observe(), reward, trial_done, self._done, info
