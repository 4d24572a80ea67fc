import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, describe, expect, it } from "vitest";

import { loadLog, logToLines, parseLog, saveLog, type EpisodeLog } from "../src/logs.js";
import type { PanelDict } from "../src/panel.js";
import { DEFAULT_PARAMS } from "../src/params.js";

const corridor: PanelDict = { wall: { right: 4 }, crossing: {}, goal: [4, 0], hint: null };
const atGoal: PanelDict = { wall: { left: 4 }, crossing: {}, goal: [0, 0], hint: null };

function sampleLog(): EpisodeLog {
  return {
    problemId: 3,
    params: DEFAULT_PARAMS,
    steps: [
      {
        trial: 0,
        before: corridor,
        move: { direction: "right", primitives: [3, 1] },
        valid: true,
        reward: 104,
        after: atGoal,
      },
      {
        trial: 1,
        before: corridor,
        move: { direction: "up", primitives: [1] },
        valid: false,
        reward: -5,
        after: corridor,
      },
      {
        trial: 1,
        before: corridor,
        move: { direction: "right", primitives: [3, 1] },
        valid: true,
        reward: 104,
        after: atGoal,
      },
    ],
    trials: [
      { length: 1, reachedGoal: true },
      { length: 2, reachedGoal: true },
    ],
  };
}

describe("logToLines", () => {
  it("writes a header, then steps and summaries in trial order", () => {
    const kinds = logToLines(sampleLog()).map((line) => JSON.parse(line).kind);
    expect(kinds).toEqual(["episode", "step", "trial", "step", "step", "trial"]);
  });

  it("writes the header in the evaluator's field names", () => {
    const header = JSON.parse(logToLines(sampleLog())[0]);
    expect(header.problem_id).toBe(3);
    expect(header.params).toEqual({
      max_opt_len: 5,
      trials_per_episode: 10,
      max_trial_steps: 200,
      max_episode_steps: 500,
      gamma: 0.95,
      goal_reward: 100,
      invalid_penalty: -5,
      shaping_coeff: 1,
    });
  });

  it("keeps steps of an unfinished trial after the last summary", () => {
    const log = sampleLog();
    log.steps.push({ ...log.steps[1], trial: 2 });
    const kinds = logToLines(log).map((line) => JSON.parse(line).kind);
    expect(kinds).toEqual(["episode", "step", "trial", "step", "step", "trial", "step"]);
  });
});

describe("parseLog", () => {
  it("round-trips through the line format", () => {
    const log = sampleLog();
    expect(parseLog(logToLines(log).join("\n"))).toEqual(log);
  });

  it("requires the episode header", () => {
    expect(() => parseLog('{"kind":"step"}')).toThrow(/episode header/);
  });

  it("rejects unknown record kinds", () => {
    const lines = logToLines(sampleLog());
    lines.push('{"kind":"banana"}');
    expect(() => parseLog(lines.join("\n"))).toThrow(/unexpected record kind/);
  });
});

describe("saveLog", () => {
  const dir = mkdtempSync(join(tmpdir(), "hopmaze-logs-"));
  afterAll(() => rmSync(dir, { recursive: true, force: true }));

  it("round-trips through a file", () => {
    const log = sampleLog();
    const path = join(dir, "episode.jsonl");
    saveLog(log, path);
    expect(loadLog(path)).toEqual(log);
  });
});
