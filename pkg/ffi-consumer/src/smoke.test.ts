/**
 * Smoke test: a foreign C program can load a model package and classify
 * an image, agreeing with the primary toolkit's own answer.
 */

import { readFileSync } from "node:fs";
import * as path from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

import {
  BuiltArtifacts,
  buildAll,
  CONSUMER_ROOT,
  FIXTURES,
  REPO_ROOT,
  run,
} from "./build";

const CENTROID_PKG = path.join(FIXTURES, "centroid_pkg");
const PROBE_A = path.join(FIXTURES, "images", "probe_a.pgm");
const PROBE_B = path.join(FIXTURES, "images", "probe_b.pgm");

let artifacts: BuiltArtifacts;

beforeAll(() => {
  artifacts = buildAll();
}, 120_000);

interface DemoResult {
  index: number;
  confidence: number;
  label: string;
}

function runDemo(model: string, image: string) {
  const result = run(artifacts.demo, [model, image]);
  return result;
}

function parseDemo(stdout: string): DemoResult {
  const match = stdout.match(/^class=(\d+) conf=([-\d.e+]+) label=(.*)$/m);
  expect(match, `unparseable demo output: ${stdout}`).not.toBeNull();
  return {
    index: Number(match![1]),
    confidence: Number(match![2]),
    label: match![3],
  };
}

function runCliInfer(model: string, image: string): string {
  const result = run("python3", [
    "-m",
    "perceptkit.cli",
    "infer",
    "--model",
    model,
    "--learner",
    "centroid",
    "--input",
    image,
  ]);
  expect(result.status).toBe(0);
  return result.stdout;
}

function parseCli(stdout: string) {
  // one line like: Category(0 'a', conf=1.000)
  const match = stdout.match(/^Category\((\d+) '([^']*)', conf=([\d.]+)\)$/m);
  expect(match, `unparseable CLI output: ${stdout}`).not.toBeNull();
  return {
    index: Number(match![1]),
    label: match![2],
    confThreeDp: match![3],
  };
}

function inProcessConfidence(model: string, image: string): number {
  const code = [
    "from perceptkit.engine import open_image",
    "from perceptkit.learners import CentroidLearner",
    "l = CentroidLearner()",
    `l.load(${JSON.stringify(model)})`,
    `c = l.infer(open_image(${JSON.stringify(image)}))`,
    "print(repr(c.confidence))",
  ].join("; ");
  const result = run("python3", ["-c", code]);
  expect(result.status).toBe(0);
  return Number(result.stdout.trim());
}

describe("header parity", () => {
  it("vendored header is byte-identical to the library's header", () => {
    const vendored = readFileSync(
      path.join(CONSUMER_ROOT, "include", "odr_centroid.h"),
    );
    const canonical = readFileSync(
      path.join(REPO_ROOT, "src", "perceptkit", "ffi", "native", "odr_centroid.h"),
    );
    expect(vendored.equals(canonical)).toBe(true);
  });
});

describe("demo program", () => {
  it("classifies the fixture image and matches the CLI", () => {
    for (const probe of [PROBE_A, PROBE_B]) {
      const demo = runDemo(CENTROID_PKG, probe);
      expect(demo.status).toBe(0);
      const got = parseDemo(demo.stdout);
      const cli = parseCli(runCliInfer(CENTROID_PKG, probe));

      expect(got.index).toBe(cli.index);
      expect(got.label).toBe(cli.label);
      expect(got.confidence.toFixed(3)).toBe(cli.confThreeDp);
    }
  });

  it("matches in-process confidence within 1e-12 relative", () => {
    for (const probe of [PROBE_A, PROBE_B]) {
      const got = parseDemo(runDemo(CENTROID_PKG, probe).stdout);
      const want = inProcessConfidence(CENTROID_PKG, probe);
      expect(Math.abs(got.confidence - want)).toBeLessThanOrEqual(
        1e-12 * Math.abs(want),
      );
    }
  });

  it("exits with BAD_PACKAGE (2) on a tampered package", async () => {
    const { cpSync, rmSync } = await import("node:fs");
    const tampered = path.join(CONSUMER_ROOT, "build", "tampered_pkg");
    rmSync(tampered, { recursive: true, force: true });
    cpSync(CENTROID_PKG, tampered, { recursive: true });
    const payload = path.join(tampered, "centroids.bin");
    const blob = readFileSync(payload);
    blob[16] ^= 0x01;
    const { writeFileSync } = await import("node:fs");
    writeFileSync(payload, blob);

    const result = runDemo(tampered, PROBE_A);
    expect(result.status).toBe(2);
    expect(result.stderr).toContain("BAD_PACKAGE");
  });

  it("fails with the file named when the image is missing", () => {
    const result = runDemo(CENTROID_PKG, "no_such_probe.pgm");
    expect(result.status).not.toBe(0);
    expect(result.stderr).toContain("no_such_probe.pgm");
  });

  it("exits NOT_FOUND (1) for a missing package", () => {
    const result = runDemo(path.join(CONSUMER_ROOT, "nope"), PROBE_A);
    expect(result.status).toBe(1);
    expect(result.stderr).toContain("NOT_FOUND");
  });
});

describe("handle semantics from C", () => {
  it("double free returns BAD_HANDLE and handles are never reused", () => {
    const result = run(artifacts.handlesCheck, [CENTROID_PKG]);
    expect(result.stderr).toBe("");
    expect(result.status).toBe(0);
    expect(result.stdout).toContain("handles_check ok");
  });
});
