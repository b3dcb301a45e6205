/**
 * Figure renderer CLI.  One argument: a job-manifest JSON file (see
 * the README for the schema).  Figures are written atomically after a
 * job renders in full, so a failing job never leaves a partial file.
 * Exit codes: 0 success, 2 bad manifest or schema-invalid inputs.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { renderFigure } from "./figures.js";
import { loadJobs } from "./job.js";
import { SchemaError } from "./schema.js";

const USAGE = "usage: rabisplit-figures <jobs.json>";

function writeAtomic(file: string, payload: string): void {
  fs.mkdirSync(path.dirname(file), { recursive: true });
  const tmp = `${file}.tmp`;
  fs.writeFileSync(tmp, payload);
  fs.renameSync(tmp, file);
}

export function main(argv: string[]): number {
  if (argv.length === 1 && (argv[0] === "-h" || argv[0] === "--help")) {
    process.stdout.write(`${USAGE}\n`);
    return 0;
  }
  if (argv.length !== 1) {
    process.stderr.write(`${USAGE}\n`);
    return 2;
  }
  try {
    const jobs = loadJobs(argv[0]);
    for (const job of jobs) {
      const svg = renderFigure(job);
      writeAtomic(job.output, `${svg}\n`);
      process.stdout.write(`${job.figure} -> ${job.output}\n`);
    }
  } catch (exc) {
    if (exc instanceof SchemaError) {
      process.stderr.write(`figure error: ${exc.message}\n`);
      return 2;
    }
    throw exc;
  }
  return 0;
}

if (process.argv[1] && fileURLToPath(import.meta.url) === path.resolve(process.argv[1])) {
  process.exitCode = main(process.argv.slice(2));
}
