/** Gym-style adapter over a remote session.
 *
 * reset/step return the usual 5-tuple split: step gives (obs, reward,
 * terminated, truncated, info) with terminated meaning the trial reached
 * the goal and truncated meaning a step cap ended it. Trials respawn
 * inside an episode, so info carries episodeDone for the outer loop.
 *
 * While stepping, the adapter mirrors the server's episode log from what
 * crosses the wire: decoded panels, validity, rewards, and trial
 * summaries. A trial's final reward separates goal from cap exactly:
 * landing on the goal pays goalReward + shapingCoeff * displacement,
 * which no capped step can reach while goalReward is positive.
 */

import { ActionSpace, displacement, type Move } from "./actions.js";
import {
  ProtocolClient,
  decodeVisual,
  type ServerOptions,
  type StepReply,
} from "./client.js";
import type { EpisodeLog } from "./logs.js";
import { decodePanel, symbolicRows, SYMBOLIC_CATEGORIES, SYMBOLIC_SLOTS, type PanelDict } from "./panel.js";
import { resolveParams, type TaskParams } from "./params.js";

export interface Observation {
  symbolic: number[][];
  panel: PanelDict;
  visual?: { shape: number[]; data: Float32Array };
}

export interface ObservationSpec {
  slots: number;
  categories: number;
  visual: boolean;
}

export interface StepResult {
  obs: Observation;
  reward: number;
  terminated: boolean;
  truncated: boolean;
  info: { valid: boolean; trialIndex: number; episodeDone: boolean };
}

export class RemoteEnv {
  readonly params: TaskParams;
  readonly actions: ActionSpace;
  readonly options: ServerOptions;
  private client_: ProtocolClient | null = null;
  private spec: ObservationSpec | null = null;
  private log_: EpisodeLog | null = null;
  private lastPanel: PanelDict | null = null;
  private trialSteps = 0;
  private episodeDone_ = true;
  private trialIndex_ = 0;

  constructor(options: ServerOptions) {
    this.options = options;
    this.params = resolveParams(options.params);
    this.actions = new ActionSpace(this.params.maxOptLen);
    if (this.params.goalReward <= 0) {
      throw new Error("goalReward must be positive for the client to classify trial endings");
    }
  }

  /** The live transport, spawning the server on first use. */
  get client(): ProtocolClient {
    if (this.client_ === null) {
      this.client_ = new ProtocolClient(this.options);
    }
    return this.client_;
  }

  get observationSpec(): ObservationSpec {
    if (this.spec === null) {
      throw new Error("no observation yet; call reset() first");
    }
    return this.spec;
  }

  get trialIndex(): number {
    return this.trialIndex_;
  }

  get episodeDone(): boolean {
    return this.episodeDone_;
  }

  /** Client-side mirror of the episode log, complete once episodeDone. */
  get log(): EpisodeLog {
    if (this.log_ === null) {
      throw new Error("no episode yet; call reset() first");
    }
    return this.log_;
  }

  private observe(reply: StepReply): Observation {
    const symbolic = symbolicRows(reply.obs.symbolic);
    const categories = symbolic[0].length;
    const expected = this.options.indexAugment
      ? SYMBOLIC_CATEGORIES + SYMBOLIC_SLOTS
      : SYMBOLIC_CATEGORIES;
    if (categories !== expected) {
      throw new Error(`server sent ${categories} categories per slot, expected ${expected}`);
    }
    this.spec = {
      slots: SYMBOLIC_SLOTS,
      categories,
      visual: reply.obs.visual !== undefined,
    };
    const obs: Observation = { symbolic, panel: decodePanel(reply.obs.symbolic) };
    if (reply.obs.visual) {
      obs.visual = decodeVisual(reply.obs.visual);
    }
    return obs;
  }

  async reset(problemId: number): Promise<Observation> {
    const reply = await this.client.reset(problemId);
    const obs = this.observe(reply);
    this.log_ = { problemId, params: this.params, steps: [], trials: [] };
    this.lastPanel = obs.panel;
    this.trialSteps = 0;
    this.trialIndex_ = 0;
    this.episodeDone_ = false;
    return obs;
  }

  async step(action: number | Move): Promise<StepResult> {
    if (this.log_ === null || this.lastPanel === null) {
      throw new Error("no episode; call reset() first");
    }
    const move = typeof action === "number" ? this.actions.decode(action) : action;
    const reply = await this.client.step(move);
    const obs = this.observe(reply);
    this.trialSteps += 1;
    this.log_.steps.push({
      trial: reply.info.trial_index,
      before: this.lastPanel,
      move,
      valid: reply.info.valid,
      reward: reply.reward,
      after: obs.panel,
    });
    const goalPay = this.params.goalReward + this.params.shapingCoeff * displacement(move);
    const reached = reply.trial_done && reply.reward === goalPay;
    if (reply.trial_done) {
      this.log_.trials.push({ length: this.trialSteps, reachedGoal: reached });
      this.trialSteps = 0;
    } else if (reply.episode_done) {
      // episode cap hit mid-trial: the unfinished trial closes as failed
      this.log_.trials.push({ length: this.trialSteps, reachedGoal: false });
      this.trialSteps = 0;
    }
    this.lastPanel = obs.panel;
    this.trialIndex_ = reply.info.trial_index + (reply.trial_done ? 1 : 0);
    this.episodeDone_ = reply.episode_done;
    return {
      obs,
      reward: reply.reward,
      terminated: reached,
      truncated: (reply.trial_done && !reached) || (reply.episode_done && !reply.trial_done),
      info: {
        valid: reply.info.valid,
        trialIndex: reply.info.trial_index,
        episodeDone: reply.episode_done,
      },
    };
  }

  async close(): Promise<number | null> {
    if (this.client_ === null) {
      return null;
    }
    const code = await this.client_.close();
    this.client_ = null;
    return code;
  }
}
