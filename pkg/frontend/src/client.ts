/** Transport: spawn a protocol server and exchange JSON lines with it.
 *
 * One JSON object per line, UTF-8, in both directions. Requests are
 * {"op": "reset", "problem_id": n}, {"op": "step", "direction": d,
 * "primitives": [...]}, and {"op": "close"}. Error replies carry an
 * "error" field and never end the session; close is answered with
 * {"closed": true} and ends the stream.
 */

import { spawn, type ChildProcessWithoutNullStreams } from "node:child_process";
import { createInterface } from "node:readline";

import type { Move } from "./actions.js";
import { resolveParams, type TaskParams } from "./params.js";

export class ProtocolError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ProtocolError";
  }
}

export interface WireVisual {
  dtype: string;
  shape: number[];
  b64: string;
}

export interface WireObservation {
  symbolic: number[];
  visual?: WireVisual;
}

export interface StepReply {
  obs: WireObservation;
  reward: number;
  trial_done: boolean;
  episode_done: boolean;
  info: { valid: boolean; trial_index: number };
}

export interface ServerOptions {
  /** Problem-set file to serve; exactly one of set and suite is required. */
  set?: string;
  /** Generated-suite file to serve instead of a problem set. */
  suite?: string;
  params?: Partial<TaskParams>;
  visual?: boolean;
  indexAugment?: boolean;
  renderSeed?: number;
  heldout?: boolean;
  mnistDir?: string;
  /** Server-side episode log directory. */
  logDir?: string;
  /** Interpreter to launch, default "python3". */
  python?: string;
  /** Extra environment entries for the server process. */
  pythonEnv?: Record<string, string>;
}

export function serveArgs(options: ServerOptions, params: TaskParams): string[] {
  if (!options.set === !options.suite) {
    throw new Error("exactly one of set and suite is required");
  }
  const args = ["-m", "hopmaze.cli", "serve"];
  args.push(...(options.set ? ["--set", options.set] : ["--suite", options.suite as string]));
  args.push(
    "--max-opt-len", String(params.maxOptLen),
    "--trials", String(params.trialsPerEpisode),
    "--max-trial-steps", String(params.maxTrialSteps),
    "--max-episode-steps", String(params.maxEpisodeSteps),
    "--gamma", String(params.gamma),
    "--goal-reward", String(params.goalReward),
    "--invalid-penalty", String(params.invalidPenalty),
    "--shaping-coeff", String(params.shapingCoeff),
  );
  if (options.visual) args.push("--visual");
  if (options.indexAugment) args.push("--index-augment");
  if (options.renderSeed !== undefined) args.push("--render-seed", String(options.renderSeed));
  if (options.heldout) args.push("--heldout");
  if (options.mnistDir) args.push("--mnist-dir", options.mnistDir);
  if (options.logDir) args.push("--log-dir", options.logDir);
  return args;
}

interface Pending {
  resolve: (reply: Record<string, unknown>) => void;
  reject: (err: Error) => void;
}

/** Request/reply client over a spawned server's stdio. */
export class ProtocolClient {
  readonly params: TaskParams;
  private readonly child: ChildProcessWithoutNullStreams;
  private readonly pending: Pending[] = [];
  private stderrTail = "";
  private streamDown = false;
  private readonly exited: Promise<number | null>;

  constructor(options: ServerOptions) {
    this.params = resolveParams(options.params);
    this.child = spawn(options.python ?? "python3", serveArgs(options, this.params), {
      stdio: ["pipe", "pipe", "pipe"],
      env: { ...process.env, ...options.pythonEnv },
    });
    this.child.stderr.setEncoding("utf-8");
    this.child.stderr.on("data", (chunk: string) => {
      this.stderrTail = (this.stderrTail + chunk).slice(-4096);
    });
    const lines = createInterface({ input: this.child.stdout });
    lines.on("line", (line) => {
      const waiter = this.pending.shift();
      if (waiter) waiter.resolve(JSON.parse(line));
    });
    lines.on("close", () => {
      this.streamDown = true;
      this.failPending();
    });
    this.exited = new Promise((resolve) => {
      this.child.on("exit", (code) => resolve(code));
    });
    this.child.on("error", () => {
      this.streamDown = true;
      this.failPending();
    });
  }

  private failPending(): void {
    const detail = this.stderrTail.trim();
    const message = detail ? `server closed the stream: ${detail}` : "server closed the stream";
    for (const waiter of this.pending.splice(0)) {
      waiter.reject(new ProtocolError(message));
    }
  }

  /** Send one request and return its reply; error replies raise. */
  async request(record: Record<string, unknown>): Promise<Record<string, unknown>> {
    if (this.streamDown) {
      throw new ProtocolError("server closed the stream");
    }
    const reply = await new Promise<Record<string, unknown>>((resolve, reject) => {
      this.pending.push({ resolve, reject });
      this.child.stdin.write(JSON.stringify(record) + "\n", (err) => {
        if (err) {
          const i = this.pending.findIndex((w) => w.resolve === resolve);
          if (i >= 0) this.pending.splice(i, 1);
          reject(new ProtocolError(`write failed: ${err.message}`));
        }
      });
    });
    if ("error" in reply) {
      throw new ProtocolError(String(reply.error));
    }
    return reply;
  }

  async reset(problemId: number): Promise<StepReply> {
    return (await this.request({ op: "reset", problem_id: problemId })) as unknown as StepReply;
  }

  async step(move: Move): Promise<StepReply> {
    return (await this.request({
      op: "step",
      direction: move.direction,
      primitives: move.primitives,
    })) as unknown as StepReply;
  }

  /** Close the session and wait for the server to exit. */
  async close(): Promise<number | null> {
    if (!this.streamDown) {
      try {
        await this.request({ op: "close" });
      } catch (err) {
        if (!(err instanceof ProtocolError)) throw err;
      }
    }
    this.child.stdin.end();
    return this.exited;
  }
}

/** Unpack a base64 visual payload into its shape and float data. */
export function decodeVisual(visual: WireVisual): { shape: number[]; data: Float32Array } {
  if (visual.dtype !== "float32") {
    throw new Error(`expected a float32 visual payload, got ${visual.dtype}`);
  }
  const bytes = Buffer.from(visual.b64, "base64");
  const data = new Float32Array(bytes.buffer, bytes.byteOffset, bytes.byteLength / 4);
  return { shape: visual.shape, data };
}
