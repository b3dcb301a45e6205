import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { spawnSync } from "node:child_process";
import type { FigureId, FigureJob, FigureStyle } from "../src/job.js";

export const TEST_DIR = path.dirname(fileURLToPath(import.meta.url));
export const FIXTURES = path.join(TEST_DIR, "fixtures", "runs");
export const CLI = path.join(TEST_DIR, "..", "dist", "cli.js");

export function manifests(group: string): string[] {
  const dir = path.join(FIXTURES, group);
  return fs
    .readdirSync(dir)
    .filter((f) => f.endsWith(".manifest.json"))
    .sort()
    .map((f) => path.join(dir, f));
}

export function tmpdir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "figs-"));
}

const DEFAULTS: FigureStyle = {
  xAxis: "ghz",
  yScale: "linear",
  gridlines: true,
  normalize: true,
};

export function job(figure: FigureId, inputs: string[], output: string,
                    style: Partial<FigureStyle> = {}): FigureJob {
  const yScale = figure === "fig2" ? "log" : DEFAULTS.yScale;
  return { figure, inputs, output, style: { ...DEFAULTS, yScale, ...style } };
}

export interface CliResult {
  status: number;
  stdout: string;
  stderr: string;
}

export function runCli(...args: string[]): CliResult {
  const r = spawnSync(process.execPath, [CLI, ...args], { encoding: "utf8" });
  if (r.error) throw r.error;
  return { status: r.status ?? -1, stdout: r.stdout, stderr: r.stderr };
}

export function writeJobs(dir: string, jobs: object[]): string {
  const file = path.join(dir, "jobs.json");
  fs.writeFileSync(file, JSON.stringify({ schema: "rabisplit.figjobs/1", jobs }));
  return file;
}

export function count(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}
