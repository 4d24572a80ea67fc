"""Line-delimited wire protocol for driving environments over a byte stream.

One JSON object per line, UTF-8, in both directions. Requests:

    {"op": "reset", "problem_id": <int>}
    {"op": "step", "direction": "left|up|right|down", "primitives": [<0..3>, ...]}
    {"op": "close"}

reset and step replies share one record shape whose field order is fixed, so
a scripted session replays byte-identically:

    {"obs": {"symbolic": [<0/1 ints, row-major>],
             "visual": {"dtype": "float32", "shape": [h, w, 3], "b64": "..."}},
     "reward": <float>, "trial_done": <bool>, "episode_done": <bool>,
     "info": {"valid": <bool>, "trial_index": <int>}}

The visual entry appears only in sessions started with a digit bank; symbolic
payloads are flat row-major lists (11x19, or 11x30 with index augmentation).
Faults never end a session: an unreadable or structurally wrong record gets
{"error": "parse: ..."}, out-of-contract requests (step before reset or after
the episode is over, unknown problem id, illegal move) get {"error": "..."},
and the next request is served normally. close is answered with
{"closed": true} and ends the stream.

One session per stream and one environment per session; concurrency is
multiple server processes.
"""

from __future__ import annotations

import base64
import json
import os
from typing import Optional

import numpy as np

from .core import Direction, Maze, Move
from .env import Environment, TaskParams, decode_symbolic
from .oracle import merge_plan, oracle_decide

_DIRECTION_NAMES = {d.name.lower(): d for d in Direction}


class ProtocolError(RuntimeError):
    """Server answered with an error record, or the stream broke."""


def _encode_reply(obs: dict, reward: float, trial_done: bool, episode_done: bool,
                  valid: bool, trial_index: int) -> dict:
    payload = {"symbolic": [int(v) for v in np.asarray(obs["symbolic"]).ravel()]}
    if "visual" in obs:
        arr = np.ascontiguousarray(obs["visual"], dtype=np.float32)
        payload["visual"] = {
            "dtype": "float32",
            "shape": list(arr.shape),
            "b64": base64.b64encode(arr.tobytes()).decode("ascii"),
        }
    return {
        "obs": payload,
        "reward": float(reward),
        "trial_done": bool(trial_done),
        "episode_done": bool(episode_done),
        "info": {"valid": bool(valid), "trial_index": int(trial_index)},
    }


class Session:
    """One agent's environment stream over `handle_line`."""

    def __init__(
        self,
        mazes: list[Maze],
        params: TaskParams = TaskParams(),
        digit_bank=None,
        index_augment: bool = False,
        render_seed: int = 0,
        heldout_digits: bool = False,
        log_dir: Optional[str] = None,
    ):
        self.mazes = mazes
        self.params = params
        self.digit_bank = digit_bank
        self.index_augment = index_augment
        self.render_seed = render_seed
        self.heldout_digits = heldout_digits
        self.log_dir = log_dir
        self._env: Optional[Environment] = None
        self._episode_seq = 0

    def handle_line(self, line: str) -> dict:
        try:
            record = json.loads(line)
        except json.JSONDecodeError as err:
            return {"error": f"parse: {err}"}
        if not isinstance(record, dict) or "op" not in record:
            return {"error": "parse: a request is an object with an 'op' field"}
        op = record["op"]
        if op == "reset":
            return self._reset(record)
        if op == "step":
            return self._step(record)
        if op == "close":
            return {"closed": True}
        return {"error": f"parse: unknown op {op!r}"}

    def _reset(self, record: dict) -> dict:
        pid = record.get("problem_id")
        if not isinstance(pid, int) or isinstance(pid, bool):
            return {"error": "parse: reset needs an integer 'problem_id'"}
        if not 0 <= pid < len(self.mazes):
            return {"error": f"unknown problem_id {pid}; have 0..{len(self.mazes) - 1}"}
        self._env = Environment(
            self.mazes[pid],
            self.params,
            problem_id=pid,
            digit_bank=self.digit_bank,
            index_augment=self.index_augment,
            render_seed=self.render_seed,
            heldout_digits=self.heldout_digits,
        )
        obs = self._env.reset()
        return _encode_reply(obs, 0.0, False, False, True, 0)

    def _step(self, record: dict) -> dict:
        if self._env is None:
            return {"error": "no episode; send reset first"}
        direction = record.get("direction")
        primitives = record.get("primitives")
        if not isinstance(direction, str) or direction not in _DIRECTION_NAMES:
            return {"error": f"parse: direction must be one of {sorted(_DIRECTION_NAMES)}"}
        if (
            not isinstance(primitives, list)
            or not primitives
            or not all(isinstance(p, int) and not isinstance(p, bool) for p in primitives)
        ):
            return {"error": "parse: primitives must be a non-empty list of integers"}
        try:
            move = Move(_DIRECTION_NAMES[direction], tuple(primitives))
            obs, reward, trial_done, episode_done, info = self._env.step(move)
        except ValueError as err:
            return {"error": f"invalid move: {err}"}
        except RuntimeError as err:
            return {"error": str(err)}
        if episode_done and self.log_dir is not None:
            name = f"episode-{self._episode_seq:04d}-p{self._env.log.problem_id}.jsonl"
            self._env.log.save(os.path.join(self.log_dir, name))
            self._episode_seq += 1
        return _encode_reply(obs, reward, trial_done, episode_done, info["valid"], info["trial_index"])


def serve_stdio(session: Session, reader=None, writer=None) -> None:
    """Serve one session: read requests line by line until close or EOF."""
    import sys

    reader = sys.stdin if reader is None else reader
    writer = sys.stdout if writer is None else writer
    for line in reader:
        if not line.strip():
            continue
        reply = session.handle_line(line)
        try:
            writer.write(json.dumps(reply, separators=(",", ":")) + "\n")
            writer.flush()
        except BrokenPipeError:
            return
        if "closed" in reply:
            break


class ProtocolClient:
    """Agent-side counterpart: sends requests, raises on error replies."""

    def __init__(self, writer, reader):
        self.writer = writer
        self.reader = reader

    def request(self, record: dict) -> dict:
        self.writer.write(json.dumps(record, separators=(",", ":")) + "\n")
        self.writer.flush()
        line = self.reader.readline()
        if not line:
            raise ProtocolError("server closed the stream")
        reply = json.loads(line)
        if "error" in reply:
            raise ProtocolError(reply["error"])
        return reply

    def reset(self, problem_id: int) -> dict:
        return self.request({"op": "reset", "problem_id": problem_id})

    def step(self, direction: str, primitives: list[int]) -> dict:
        return self.request({"op": "step", "direction": direction, "primitives": primitives})

    def close(self) -> None:
        try:
            self.request({"op": "close"})
        except ProtocolError:
            pass


def symbolic_panel(reply: dict):
    """Reassemble a reply's flat symbolic list into its (11, k) array."""
    flat = np.asarray(reply["obs"]["symbolic"], dtype=np.float32)
    return flat.reshape(11, flat.size // 11)


def run_protocol_oracle(client: ProtocolClient, problem_id: int, params: TaskParams) -> tuple[int, int]:
    """Play one episode over the wire with the oracle policy.

    The server keeps the authoritative episode log; this returns only
    (trials that reached the goal, trials played). A trial that ends without
    hitting a step cap can only have ended at the goal.
    """
    reply = client.reset(problem_id)
    max_opt_len = params.max_opt_len
    plan: Optional[list[Move]] = None
    trial_moves: list[Move] = []
    cursor = 0
    trial_steps = 0
    episode_steps = 0
    reached = 0
    played = 0
    while True:
        if plan is None:
            move = oracle_decide(decode_symbolic(symbolic_panel(reply)), max_opt_len)
        else:
            move = plan[cursor]
            cursor += 1
        reply = client.step(move.direction.name.lower(), list(move.primitives))
        if not reply["info"]["valid"]:
            raise RuntimeError(f"oracle made an invalid move over the wire: {move}")
        trial_steps += 1
        episode_steps += 1
        if plan is None:
            trial_moves.append(move)
        if reply["trial_done"]:
            played += 1
            capped = trial_steps >= params.max_trial_steps or episode_steps >= params.max_episode_steps
            if not capped:
                reached += 1
                if plan is None:
                    plan = merge_plan(trial_moves, max_opt_len)
            trial_moves = []
            cursor = 0
            trial_steps = 0
        if reply["episode_done"]:
            return reached, played
