/** Problem-set files: enough of the maze records to pick problems and
 * normalize plan lengths. The client never simulates the maze; it only
 * reads ids and the recorded optimal path. */

import { readFileSync } from "node:fs";

export type Cell = [number, number];

export interface ProblemRecord {
  id: number;
  gridSize: number;
  start: Cell;
  goal: Cell;
  path: Cell[];
}

export function loadProblemSet(path: string): ProblemRecord[] {
  const lines = readFileSync(path, "utf-8")
    .split("\n")
    .filter((line) => line.trim());
  if (lines.length === 0) {
    throw new Error(`${path}: empty problem-set file`);
  }
  const header = JSON.parse(lines[0]);
  if (header.kind !== "problem_set") {
    throw new Error(`${path}: not a problem-set file`);
  }
  const problems: ProblemRecord[] = [];
  for (const line of lines.slice(1)) {
    const record = JSON.parse(line);
    if (record.kind !== "maze") {
      throw new Error(`${path}: unexpected record kind ${JSON.stringify(record.kind)}`);
    }
    problems.push({
      id: record.id,
      gridSize: record.grid_size,
      start: record.start,
      goal: record.goal,
      path: record.path,
    });
  }
  if (problems.length !== header.count) {
    throw new Error(`${path}: header promises ${header.count} mazes, found ${problems.length}`);
  }
  return problems;
}

/** Moves needed to walk the optimal path with straight runs merged and
 * each run cut into hops of at most 3 * maxOptLen units. */
export function optimalPlanLength(path: readonly Cell[], maxOptLen: number): number {
  const cap = 3 * maxOptLen;
  let total = 0;
  let i = 0;
  while (i < path.length - 1) {
    const step = [path[i + 1][0] - path[i][0], path[i + 1][1] - path[i][1]];
    let j = i;
    while (
      j < path.length - 1 &&
      path[j + 1][0] - path[j][0] === step[0] &&
      path[j + 1][1] - path[j][1] === step[1]
    ) {
      j++;
    }
    total += Math.ceil((j - i) / cap);
    i = j;
  }
  return total;
}
