/**
 * Figure jobs.  A job manifest is a JSON file listing which figures
 * to build, from which input files, with what styling.  Input and
 * output paths are resolved relative to the manifest's directory so
 * a job file can travel with its data.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { z } from "zod";
import { SchemaError } from "./schema.js";

export const FIGURE_IDS = ["fig2", "fig3", "fig4", "fig5", "table1"] as const;
export type FigureId = (typeof FIGURE_IDS)[number];

export interface FigureStyle {
  /** Frequency axis: absolute GHz or per-curve detuning in units of g. */
  xAxis: "ghz" | "rabi";
  yScale: "linear" | "log";
  /** Horizontal reference gridlines at the y ticks. */
  gridlines: boolean;
  /** Scale every spectrum curve to unit maximum. */
  normalize: boolean;
}

export interface FigureJob {
  figure: FigureId;
  inputs: string[];
  output: string;
  style: FigureStyle;
}

const styleBlock = z
  .object({
    x_axis: z.enum(["ghz", "rabi"]),
    y_scale: z.enum(["linear", "log"]),
    gridlines: z.boolean(),
    normalize: z.boolean(),
  })
  .partial()
  .strict();

const jobEntry = z
  .object({
    figure: z.enum(FIGURE_IDS),
    inputs: z.array(z.string()).min(1, "empty input set"),
    output: z.string().min(1),
    style: styleBlock.optional(),
  })
  .strict();

export const jobsFile = z
  .object({
    schema: z.literal("rabisplit.figjobs/1"),
    jobs: z.array(jobEntry).min(1, "no jobs"),
  })
  .strict();

/** Spectral densities span decades; spectra read best on a linear scale. */
function defaultStyle(figure: FigureId): FigureStyle {
  return {
    xAxis: "ghz",
    yScale: figure === "fig2" ? "log" : "linear",
    gridlines: true,
    normalize: true,
  };
}

export function loadJobs(manifestPath: string): FigureJob[] {
  let raw: string;
  try {
    raw = fs.readFileSync(manifestPath, "utf8");
  } catch {
    throw new SchemaError(`job manifest ${manifestPath}: file not found`);
  }
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch (exc) {
    throw new SchemaError(
      `job manifest ${manifestPath}: not valid JSON (${(exc as Error).message})`);
  }
  const result = jobsFile.safeParse(doc);
  if (!result.success) {
    const issue = result.error.issues[0];
    const where = issue.path.length ? issue.path.join(".") : "top level";
    throw new SchemaError(`job manifest ${manifestPath}: ${where}: ${issue.message}`);
  }
  const base = path.dirname(manifestPath);
  return result.data.jobs.map((entry) => ({
    figure: entry.figure,
    inputs: entry.inputs.map((p) => path.resolve(base, p)),
    output: path.resolve(base, entry.output),
    style: {
      ...defaultStyle(entry.figure),
      ...(entry.style?.x_axis !== undefined && { xAxis: entry.style.x_axis }),
      ...(entry.style?.y_scale !== undefined && { yScale: entry.style.y_scale }),
      ...(entry.style?.gridlines !== undefined && { gridlines: entry.style.gridlines }),
      ...(entry.style?.normalize !== undefined && { normalize: entry.style.normalize }),
    },
  }));
}
