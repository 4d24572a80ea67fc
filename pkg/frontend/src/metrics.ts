/** Normalized episode metrics, numerically identical to the evaluator's:
 * action validity, goal rate over the trial budget, and the mean
 * optimal/actual move ratio over the trial budget. */

import type { EpisodeLog } from "./logs.js";

export function rhoActions(log: EpisodeLog): number {
  if (log.steps.length === 0) {
    throw new Error("episode has no steps");
  }
  let valid = 0;
  for (const step of log.steps) {
    if (step.valid) valid++;
  }
  return valid / log.steps.length;
}

export function rhoGoals(log: EpisodeLog): number {
  let reached = 0;
  for (const trial of log.trials) {
    if (trial.reachedGoal) reached++;
  }
  return reached / log.params.trialsPerEpisode;
}

export function rhoPlan(log: EpisodeLog, optimalMoves: number): number {
  if (optimalMoves < 1) {
    throw new Error("optimalMoves must be positive");
  }
  let total = 0;
  for (const trial of log.trials) {
    total += optimalMoves / trial.length;
  }
  return total / log.params.trialsPerEpisode;
}

export interface EpisodeMetrics {
  rho_actions: number;
  rho_goals: number;
  rho_plan: number;
}

export function episodeMetrics(log: EpisodeLog, optimalMoves: number): EpisodeMetrics {
  return {
    rho_actions: rhoActions(log),
    rho_goals: rhoGoals(log),
    rho_plan: rhoPlan(log, optimalMoves),
  };
}

function meanStd(values: number[]): { mean: number; std: number } {
  const n = values.length;
  const mean = values.reduce((a, v) => a + v, 0) / n;
  const variance = values.reduce((a, v) => a + (v - mean) ** 2, 0) / n;
  return { mean, std: Math.sqrt(variance) };
}

export interface Report {
  episodes: Array<{ problem_id: number } & EpisodeMetrics>;
  summary: Partial<Record<keyof EpisodeMetrics, { mean: number; std: number }>>;
}

/** One metrics row per episode plus the aggregate; the record layout
 * matches the evaluator's JSON report. */
export function evaluationReport(
  logs: readonly EpisodeLog[],
  optimalMoves: ReadonlyMap<number, number>,
): Report {
  const episodes = logs.map((log) => {
    const optimal = optimalMoves.get(log.problemId);
    if (optimal === undefined) {
      throw new Error(`no optimal plan length for problem ${log.problemId}`);
    }
    return { problem_id: log.problemId, ...episodeMetrics(log, optimal) };
  });
  const summary: Report["summary"] = {};
  if (episodes.length > 0) {
    for (const key of ["rho_actions", "rho_goals", "rho_plan"] as const) {
      summary[key] = meanStd(episodes.map((row) => row[key]));
    }
  }
  return { episodes, summary };
}
