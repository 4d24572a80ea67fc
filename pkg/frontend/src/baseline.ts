/** Drive baseline episodes against a server and score them.
 *
 * Each episode plays to episodeDone, optionally writing the mirrored log
 * where the evaluator can score it. The returned report has one metrics
 * row per episode plus a mean/std aggregate; zero episodes give an empty
 * report.
 */

import { mkdirSync } from "node:fs";
import { join } from "node:path";

import type { Agent } from "./agents.js";
import type { RemoteEnv } from "./env.js";
import { saveLog, type EpisodeLog } from "./logs.js";
import { evaluationReport, type Report } from "./metrics.js";
import { loadProblemSet, optimalPlanLength, type ProblemRecord } from "./problems.js";

export interface BaselineOptions {
  /** Write one episode log per episode into this directory. */
  logDir?: string;
  /** Problem records; defaults to reading the environment's set file. */
  problems?: ProblemRecord[];
}

export async function runBaseline(
  env: RemoteEnv,
  agent: Agent,
  nEpisodes: number,
  options: BaselineOptions = {},
): Promise<Report> {
  if (nEpisodes === 0) {
    return { episodes: [], summary: {} };
  }
  let problems = options.problems;
  if (!problems) {
    if (!env.options.set) {
      throw new Error("pass problems explicitly when the server runs on a suite");
    }
    problems = loadProblemSet(env.options.set);
  }
  if (options.logDir) {
    mkdirSync(options.logDir, { recursive: true });
  }
  const optimal = new Map(
    problems.map((p) => [p.id, optimalPlanLength(p.path, env.params.maxOptLen)]),
  );
  const logs: EpisodeLog[] = [];
  for (let episode = 0; episode < nEpisodes; episode++) {
    const problemId = agent.problemFor
      ? agent.problemFor(episode, problems.length)
      : episode % problems.length;
    agent.begin?.(episode);
    let obs = await env.reset(problemId);
    while (!env.episodeDone) {
      const result = await env.step(agent.act(obs, env));
      obs = result.obs;
    }
    logs.push(env.log);
    if (options.logDir) {
      const name = `episode-${String(episode).padStart(4, "0")}-p${problemId}.jsonl`;
      saveLog(env.log, join(options.logDir, name));
    }
  }
  return evaluationReport(logs, optimal);
}
