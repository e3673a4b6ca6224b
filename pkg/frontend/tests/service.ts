/**
 * Spawns the real backend on a throwaway project copy so contract
 * tests exercise the actual HTTP surface, not a mock of it.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { cpSync, mkdirSync, mkdtempSync, rmSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const HERE = dirname(fileURLToPath(import.meta.url));
export const FIXTURES = join(HERE, "..", "..", "fixtures");

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      probe.close(() => resolve(address.port));
    });
  });
}

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

export interface FixtureService {
  baseUrl: string;
  projectDir: string;
  stop(): Promise<void>;
}

/**
 * Copy `corpusFixture` (or create an empty corpus when null) plus the
 * bundled data directory into a temp project and serve it.
 */
export async function startService(
  corpusFixture: string | null,
): Promise<FixtureService> {
  const projectDir = mkdtempSync(join(tmpdir(), "prepwb-ui-"));
  const corpusDir = join(projectDir, "corpus");
  if (corpusFixture === null) {
    mkdirSync(corpusDir);
  } else {
    cpSync(corpusFixture, corpusDir, { recursive: true });
  }
  cpSync(join(FIXTURES, "data"), join(projectDir, "data"), {
    recursive: true,
  });

  const port = await freePort();
  const baseUrl = `http://127.0.0.1:${port}`;
  const proc: ChildProcess = spawn(
    "python3",
    [
      "-m",
      "prepwb",
      "serve",
      "--corpus",
      corpusDir,
      "--data",
      join(projectDir, "data"),
      "--address",
      `127.0.0.1:${port}`,
    ],
    { stdio: "ignore" },
  );

  const deadline = Date.now() + 20_000;
  for (;;) {
    if (proc.exitCode !== null) {
      throw new Error(`service exited with ${proc.exitCode} during startup`);
    }
    try {
      const response = await fetch(`${baseUrl}/api/prepositions`);
      if (response.ok) break;
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) {
      proc.kill("SIGKILL");
      throw new Error("service never came up");
    }
    await sleep(100);
  }

  return {
    baseUrl,
    projectDir,
    async stop() {
      proc.kill("SIGKILL");
      await new Promise((resolve) => proc.once("exit", resolve));
      rmSync(projectDir, { recursive: true, force: true });
    },
  };
}
