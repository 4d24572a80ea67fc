/** Episode logs in the line-delimited format the evaluator accepts.
 *
 * A log file is one JSON record per line: an episode header, then step
 * and trial-summary records in chronological order. Files written here
 * parse and score identically to server-written ones; files written by
 * the server (for example oracle logs) load back for replay.
 */

import { readFileSync, writeFileSync } from "node:fs";

import type { Move } from "./actions.js";
import type { PanelDict } from "./panel.js";
import { paramsFromHeader, paramsToHeader, type TaskParams } from "./params.js";

export interface StepRecord {
  trial: number;
  before: PanelDict;
  move: Move;
  valid: boolean;
  reward: number;
  after: PanelDict;
}

export interface TrialSummary {
  length: number;
  reachedGoal: boolean;
}

export interface EpisodeLog {
  problemId: number;
  params: TaskParams;
  steps: StepRecord[];
  trials: TrialSummary[];
}

function panelRecord(panel: PanelDict): Record<string, unknown> {
  return { wall: panel.wall, crossing: panel.crossing, goal: panel.goal, hint: panel.hint };
}

function stepRecord(step: StepRecord): Record<string, unknown> {
  return {
    kind: "step",
    trial: step.trial,
    before: panelRecord(step.before),
    move: { direction: step.move.direction, primitives: step.move.primitives },
    valid: step.valid,
    reward: step.reward,
    after: panelRecord(step.after),
  };
}

export function logToLines(log: EpisodeLog): string[] {
  const lines = [
    JSON.stringify({
      kind: "episode",
      problem_id: log.problemId,
      params: paramsToHeader(log.params),
    }),
  ];
  const perTrial = new Map<number, StepRecord[]>();
  for (const step of log.steps) {
    const group = perTrial.get(step.trial);
    if (group) group.push(step);
    else perTrial.set(step.trial, [step]);
  }
  for (let i = 0; i < log.trials.length; i++) {
    for (const step of perTrial.get(i) ?? []) {
      lines.push(JSON.stringify(stepRecord(step)));
    }
    lines.push(
      JSON.stringify({
        kind: "trial",
        length: log.trials[i].length,
        reached_goal: log.trials[i].reachedGoal,
      }),
    );
  }
  for (const trial of [...perTrial.keys()].sort((a, b) => a - b)) {
    if (trial >= log.trials.length) {
      for (const step of perTrial.get(trial) ?? []) {
        lines.push(JSON.stringify(stepRecord(step)));
      }
    }
  }
  return lines;
}

export function saveLog(log: EpisodeLog, path: string): void {
  writeFileSync(path, logToLines(log).join("\n") + "\n", "utf-8");
}

export function parseLog(text: string): EpisodeLog {
  const records = text
    .split("\n")
    .filter((line) => line.trim())
    .map((line) => JSON.parse(line));
  if (records.length === 0 || records[0].kind !== "episode") {
    throw new Error("episode log must start with an episode header");
  }
  const log: EpisodeLog = {
    problemId: records[0].problem_id,
    params: paramsFromHeader(records[0].params),
    steps: [],
    trials: [],
  };
  for (const record of records.slice(1)) {
    if (record.kind === "step") {
      log.steps.push({
        trial: record.trial,
        before: record.before,
        move: record.move,
        valid: record.valid,
        reward: record.reward,
        after: record.after,
      });
    } else if (record.kind === "trial") {
      log.trials.push({ length: record.length, reachedGoal: record.reached_goal });
    } else {
      throw new Error(`unexpected record kind ${JSON.stringify(record.kind)} in episode log`);
    }
  }
  return log;
}

export function loadLog(path: string): EpisodeLog {
  return parseLog(readFileSync(path, "utf-8"));
}
