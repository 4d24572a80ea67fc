"""Normalized episode metrics.

Three per-episode ratios, each in [0, 1] for any sane agent:

* action validity: valid moves over moves taken,
* goal rate: trials that reached the goal over the trial budget,
* plan ratio: mean over the trial budget of optimal moves / moves used,
  with untouched trials contributing zero.
"""

from __future__ import annotations

import math

from .env import EpisodeLog


def rho_actions(log: EpisodeLog) -> float:
    """Fraction of logged moves that were valid."""
    if not log.steps:
        raise ValueError("episode has no steps")
    return sum(1 for s in log.steps if s.valid) / len(log.steps)


def rho_goals(log: EpisodeLog) -> float:
    """Fraction of the trial budget that reached the goal."""
    budget = log.params.trials_per_episode
    return sum(1 for t in log.trials if t.reached_goal) / budget


def rho_plan(log: EpisodeLog, optimal_moves: int) -> float:
    """Mean of optimal/actual move counts over the trial budget.

    Played trials score ``optimal_moves / length`` whether or not they
    reached the goal (a timed-out trial still consumed its steps); trials
    never started score 0.
    """
    if optimal_moves < 1:
        raise ValueError("optimal_moves must be positive")
    budget = log.params.trials_per_episode
    return sum(optimal_moves / t.length for t in log.trials) / budget


def episode_metrics(log: EpisodeLog, optimal_moves: int) -> dict[str, float]:
    return {
        "rho_actions": rho_actions(log),
        "rho_goals": rho_goals(log),
        "rho_plan": rho_plan(log, optimal_moves),
    }


def _mean_std(values: list[float]) -> dict[str, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return {"mean": mean, "std": math.sqrt(var)}


def summarize(per_episode: list[dict[str, float]]) -> dict[str, dict[str, float]]:
    """Aggregate per-episode metrics into mean and population std."""
    if not per_episode:
        raise ValueError("nothing to summarize")
    keys = per_episode[0].keys()
    return {k: _mean_std([m[k] for m in per_episode]) for k in keys}


def evaluation_report(
    logs: list[EpisodeLog], optimal_moves: dict[int, int]
) -> dict:
    """Full report: one metrics row per episode plus the aggregate."""
    rows = []
    for log in logs:
        m = episode_metrics(log, optimal_moves[log.problem_id])
        rows.append({"problem_id": log.problem_id, **m})
    return {
        "episodes": rows,
        "summary": summarize([{k: v for k, v in r.items() if k != "problem_id"} for r in rows]),
    }
