import { execFileSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

/** The server package lives one level up; run it from its source tree so
 * the tests need no installation step. */
export const pythonEnv: Record<string, string> = {
  PYTHONPATH:
    resolve(here, "..", "..", "src") +
    (process.env.PYTHONPATH ? `:${process.env.PYTHONPATH}` : ""),
};

/** Run one server-side CLI command and return its stdout. */
export function cli(...args: string[]): string {
  return execFileSync("python3", ["-m", "hopmaze.cli", ...args], {
    env: { ...process.env, ...pythonEnv },
    encoding: "utf-8",
  });
}

export function makeWorkspace(prefix: string): { dir: string; cleanup: () => void } {
  const dir = mkdtempSync(join(tmpdir(), prefix));
  return { dir, cleanup: () => rmSync(dir, { recursive: true, force: true }) };
}
