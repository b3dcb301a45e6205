/**
 * Readers for the rabisplit CLI's documented output formats: the run
 * manifest, the peaks report, the table-1 aggregate, and the numeric
 * CSV tables.  Everything is validated up front so a render either
 * starts from known-good inputs or fails before any file is written.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import Papa from "papaparse";
import { z } from "zod";

export class SchemaError extends Error {}

const finite = z.number().finite();
const metric = finite.nullable();

export const CLASSIFICATIONS = ["single", "S", "AS", "AS*", "VAS"] as const;
export type Classification = (typeof CLASSIFICATIONS)[number];

// ------------------------------------------------------------------
// JSON artifacts
// ------------------------------------------------------------------

const peakEntry = z.object({
  position_ghz: finite,
  height: finite,
  fwhm_ghz: metric,
});

const peakReport = z.object({
  classification: z.enum(CLASSIFICATIONS),
  delta_ghz: finite,
  height_ratio: metric,
  position_asymmetry: metric,
  shift_ghz: metric,
  splitting_ghz: metric,
  peaks: z.array(peakEntry).min(1),
});

export const peaksFile = z.object({
  schema: z.literal("rabisplit.peaks/1"),
  label: z.string(),
  reports: z.record(z.enum(["full", "rwa"]), peakReport),
});

const runConfig = z
  .object({
    label: z.string(),
    delta: finite,
    mode: z.enum(["full", "rwa", "both"]),
    intrinsic_kind: z.enum(["ohmic", "lowfreq"]),
    alpha: finite,
    corner: finite,
    g: finite,
    omega_cav: finite,
    linewidth: finite,
    q_factor: finite,
  })
  .passthrough();

export const manifestFile = z
  .object({
    schema: z.literal("rabisplit.manifest/1"),
    label: z.string(),
    config: runConfig,
    files: z.array(z.string()),
  })
  .passthrough();

const tableCell = z.object({
  label: z.string(),
  intrinsic: z.enum(["lowfreq", "ohmic"]),
  regime: z.enum(["weak", "strong", "ultra"]),
  q_factor: finite,
  g_ghz: finite,
  classification: z.enum(CLASSIFICATIONS),
  height_ratio: metric,
  position_asymmetry: metric,
  shift_ghz: metric,
  splitting_ghz: metric,
});

export const tableFile = z.object({
  schema: z.literal("rabisplit.table1/1"),
  cells: z.array(tableCell).min(1),
});

export type PeaksFile = z.infer<typeof peaksFile>;
export type PeakReport = z.infer<typeof peakReport>;
export type Manifest = z.infer<typeof manifestFile>;
export type TableFile = z.infer<typeof tableFile>;
export type TableCell = z.infer<typeof tableCell>;

function readJson(file: string, validator: z.ZodTypeAny, what: string): unknown {
  let raw: string;
  try {
    raw = fs.readFileSync(file, "utf8");
  } catch {
    throw new SchemaError(`${what} ${file}: file not found`);
  }
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch (exc) {
    throw new SchemaError(`${what} ${file}: not valid JSON (${(exc as Error).message})`);
  }
  const result = validator.safeParse(doc);
  if (!result.success) {
    const issue = result.error.issues[0];
    const where = issue.path.length ? issue.path.join(".") : "top level";
    throw new SchemaError(`${what} ${file}: ${where}: ${issue.message}`);
  }
  return result.data;
}

export function readPeaks(file: string): PeaksFile {
  return readJson(file, peaksFile, "peaks report") as PeaksFile;
}

export function readTable(file: string): TableFile {
  return readJson(file, tableFile, "table") as TableFile;
}

// ------------------------------------------------------------------
// CSV tables
// ------------------------------------------------------------------

export interface SpectrumRow {
  omega_ghz: number;
  power: number;
  r_shift_ghz: number;
  gamma_ghz: number;
  mode: "full" | "rwa";
}

export interface DensityRow {
  omega_ghz: number;
  j_intrinsic_ghz: number;
  j_cavity_ghz: number;
}

function readCsv(file: string, header: string[]): Record<string, unknown>[] {
  let raw: string;
  try {
    raw = fs.readFileSync(file, "utf8");
  } catch {
    throw new SchemaError(`csv ${file}: file not found`);
  }
  const parsed = Papa.parse<Record<string, unknown>>(raw, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new SchemaError(`csv ${file}: row ${e.row}: ${e.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  if (fields.join(",") !== header.join(",")) {
    throw new SchemaError(
      `csv ${file}: header [${fields.join(",")}] does not match [${header.join(",")}]`);
  }
  if (parsed.data.length === 0) {
    throw new SchemaError(`csv ${file}: no data rows`);
  }
  return parsed.data;
}

function numeric(row: Record<string, unknown>, key: string, file: string, i: number): number {
  const v = row[key];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new SchemaError(`csv ${file}: row ${i}: ${key} is not a finite number`);
  }
  return v;
}

export function readSpectrum(file: string): SpectrumRow[] {
  const rows = readCsv(file, ["omega_ghz", "power", "r_shift_ghz", "gamma_ghz", "mode"]);
  return rows.map((row, i) => {
    const mode = row.mode;
    if (mode !== "full" && mode !== "rwa") {
      throw new SchemaError(`csv ${file}: row ${i}: unknown mode ${String(mode)}`);
    }
    return {
      omega_ghz: numeric(row, "omega_ghz", file, i),
      power: numeric(row, "power", file, i),
      r_shift_ghz: numeric(row, "r_shift_ghz", file, i),
      gamma_ghz: numeric(row, "gamma_ghz", file, i),
      mode,
    };
  });
}

export function readDensities(file: string): DensityRow[] {
  const rows = readCsv(file, ["omega_ghz", "j_intrinsic_ghz", "j_cavity_ghz"]);
  return rows.map((row, i) => ({
    omega_ghz: numeric(row, "omega_ghz", file, i),
    j_intrinsic_ghz: numeric(row, "j_intrinsic_ghz", file, i),
    j_cavity_ghz: numeric(row, "j_cavity_ghz", file, i),
  }));
}

// ------------------------------------------------------------------
// Runs: a manifest plus access to the files it references
// ------------------------------------------------------------------

export class Run {
  readonly manifest: Manifest;
  readonly dir: string;

  constructor(manifestPath: string) {
    this.manifest = readJson(manifestPath, manifestFile, "manifest") as Manifest;
    this.dir = path.dirname(manifestPath);
  }

  get label(): string {
    return this.manifest.label;
  }

  /** Path of a referenced artifact; the manifest must list it. */
  private referenced(suffix: string, what: string): string {
    const name = this.manifest.files.find((f) => f.endsWith(suffix));
    if (name === undefined) {
      throw new SchemaError(`run ${this.label}: manifest lists no ${what}`);
    }
    const file = path.join(this.dir, name);
    if (!fs.existsSync(file)) {
      throw new SchemaError(`run ${this.label}: ${what} ${file} is missing on disk`);
    }
    return file;
  }

  spectrum(): SpectrumRow[] {
    return readSpectrum(this.referenced(".spectrum.csv", "spectrum table"));
  }

  densities(): DensityRow[] {
    return readDensities(this.referenced(".densities.csv", "density table"));
  }

  peaks(): PeaksFile {
    const doc = readPeaks(this.referenced(".peaks.json", "peaks report"));
    if (doc.label !== this.label) {
      throw new SchemaError(
        `run ${this.label}: peaks report is labelled ${doc.label}`);
    }
    return doc;
  }
}
