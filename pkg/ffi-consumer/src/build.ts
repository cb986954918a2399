/**
 * Build orchestration: produce the shared library via the primary
 * package's build module, then compile the C programs against it.
 */

import { spawnSync } from "node:child_process";
import { existsSync, mkdirSync } from "node:fs";
import * as path from "node:path";

export const CONSUMER_ROOT = path.resolve(__dirname, "..");
export const REPO_ROOT = path.resolve(CONSUMER_ROOT, "..");
export const BUILD_DIR = path.join(CONSUMER_ROOT, "build");
export const FIXTURES = path.join(REPO_ROOT, "tests", "fixtures");

export interface RunResult {
  status: number;
  stdout: string;
  stderr: string;
}

export function run(command: string, args: string[]): RunResult {
  const proc = spawnSync(command, args, { encoding: "utf8" });
  if (proc.error) {
    throw new Error(`failed to spawn ${command}: ${proc.error.message}`);
  }
  return {
    status: proc.status ?? -1,
    stdout: proc.stdout ?? "",
    stderr: proc.stderr ?? "",
  };
}

function runChecked(command: string, args: string[]): RunResult {
  const result = run(command, args);
  if (result.status !== 0) {
    throw new Error(
      `${command} ${args.join(" ")} exited ${result.status}\n${result.stderr}`,
    );
  }
  return result;
}

export function buildSharedLibrary(): string {
  mkdirSync(BUILD_DIR, { recursive: true });
  const result = runChecked("python3", [
    "-m",
    "perceptkit.ffi.build",
    "--out",
    BUILD_DIR,
  ]);
  const libPath = result.stdout.trim();
  if (!existsSync(libPath)) {
    throw new Error(`build reported ${libPath} but it does not exist`);
  }
  return libPath;
}

export function buildCProgram(sourceName: string, libPath: string): string {
  const binary = path.join(BUILD_DIR, sourceName.replace(/\.c$/, ""));
  runChecked("cc", [
    "-std=c11",
    "-O2",
    "-I",
    path.join(CONSUMER_ROOT, "include"),
    path.join(CONSUMER_ROOT, "src", sourceName),
    libPath,
    `-Wl,-rpath,${path.dirname(libPath)}`,
    "-o",
    binary,
  ]);
  return binary;
}

export interface BuiltArtifacts {
  libPath: string;
  demo: string;
  handlesCheck: string;
}

export function buildAll(): BuiltArtifacts {
  const libPath = buildSharedLibrary();
  return {
    libPath,
    demo: buildCProgram("demo.c", libPath),
    handlesCheck: buildCProgram("handles_check.c", libPath),
  };
}
