/** Baseline agents: uniform-random over the flat action space, and a
 * replay of server-written oracle logs. Neither learns anything. */

import { readdirSync } from "node:fs";
import { join } from "node:path";

import type { Move } from "./actions.js";
import type { RemoteEnv, Observation } from "./env.js";
import { loadLog, type EpisodeLog } from "./logs.js";
import { mulberry32, randomIndex, type Rng } from "./rng.js";

export interface Agent {
  readonly name: string;
  /** Problem to play in this episode; omitted lets the runner cycle the set. */
  problemFor?(episode: number, problemCount: number): number;
  /** Called once before each episode. */
  begin?(episode: number): void;
  act(obs: Observation, env: RemoteEnv): number | Move;
}

export class RandomAgent implements Agent {
  readonly name = "random";
  private readonly rng: Rng;

  constructor(seed: number) {
    this.rng = mulberry32(seed);
  }

  act(_obs: Observation, env: RemoteEnv): number {
    return randomIndex(this.rng, env.actions.n);
  }
}

/** Replays recorded episodes move for move; the environment is
 * deterministic, so outcomes and metrics reproduce exactly. */
export class OracleReplayAgent implements Agent {
  readonly name = "oracle-replay";
  private readonly episodes: EpisodeLog[];
  private moves: Move[] = [];
  private cursor = 0;

  constructor(episodes: EpisodeLog[]) {
    if (episodes.length === 0) {
      throw new Error("nothing to replay");
    }
    this.episodes = episodes;
  }

  get episodeCount(): number {
    return this.episodes.length;
  }

  problemFor(episode: number): number {
    return this.episodes[episode % this.episodes.length].problemId;
  }

  begin(episode: number): void {
    this.moves = this.episodes[episode % this.episodes.length].steps.map((s) => s.move);
    this.cursor = 0;
  }

  act(): Move {
    if (this.cursor >= this.moves.length) {
      throw new Error("replay ran out of moves before the episode ended");
    }
    return this.moves[this.cursor++];
  }
}

/** Load every episode log in a directory, in filename order. */
export function loadReplayLogs(dir: string): EpisodeLog[] {
  const names = readdirSync(dir)
    .filter((name) => name.endsWith(".jsonl"))
    .sort();
  return names.map((name) => loadLog(join(dir, name)));
}
