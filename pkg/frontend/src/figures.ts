/**
 * Figure assembly: turns validated runs into multi-panel SVG text.
 *
 * Layouts mirror the demonstration set of the numerical package:
 *   fig2    spectral densities, one panel per intrinsic bath kind
 *   fig3    cavity-only doublets, 2x2 panels (quality factor x dressing mode)
 *   fig4/5  regime scans, one panel per bath kind, three couplings each
 *   table1  classification summary card
 *
 * Rendering is pure: the same inputs produce byte-identical SVG.
 */

import { format } from "d3-format";
import type { FigureJob, FigureStyle } from "./job.js";
import {
  Run,
  SchemaError,
  type PeakReport,
  type SpectrumRow,
  type TableCell,
  readTable,
} from "./schema.js";
import {
  type AxisSpec,
  PALETTE,
  esc,
  linearAxis,
  logAxis,
  polyline,
  px,
  svgDocument,
  tag,
  textEl,
} from "./svg.js";

const PLAIN = format("~g");
const METRIC = format(".3~g");

export function freqLabel(ghz: number): string {
  const a = Math.abs(ghz);
  if (a >= 1) return `${PLAIN(ghz)} GHz`;
  if (a >= 1e-3) return `${PLAIN(ghz * 1e3)} MHz`;
  return `${PLAIN(ghz * 1e6)} kHz`;
}

// ------------------------------------------------------------------
// Panel model
// ------------------------------------------------------------------

interface Marker {
  x: number;
  y: number;
}

interface Curve {
  label: string;
  xs: number[];
  ys: number[];
  color: string;
  markers: Marker[];
  /** One classification tag per curve, anchored at its tallest peak. */
  note?: { x: number; y: number; text: string };
}

interface Panel {
  title: string;
  curves: Curve[];
}

const GEOM = {
  left: 58,
  right: 14,
  top: 30,
  bottom: 46,
  plotW: 320,
  plotH: 210,
} as const;

const CELL_W = GEOM.left + GEOM.plotW + GEOM.right;
const CELL_H = GEOM.top + GEOM.plotH + GEOM.bottom;

function yDomain(panel: Panel, scale: "linear" | "log"): [number, number] {
  let hi = -Infinity;
  let loPos = Infinity;
  for (const c of panel.curves) {
    for (const y of c.ys) {
      if (y > hi) hi = y;
      if (y > 0 && y < loPos) loPos = y;
    }
  }
  if (!(hi > 0) && scale === "log") {
    throw new SchemaError(`panel ${panel.title}: no positive values for a log axis`);
  }
  if (scale === "log") {
    return [Math.max(loPos, hi * 1e-8), hi * 1.3];
  }
  return [0, hi * 1.06];
}

function xDomain(panel: Panel): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const c of panel.curves) {
    for (const x of c.xs) {
      if (x < lo) lo = x;
      if (x > hi) hi = x;
    }
  }
  return [lo, hi];
}

function renderPanel(panel: Panel, index: number, figure: string,
                     style: FigureStyle, xLabel: string, yLabel: string): string {
  const { left, top, plotW, plotH } = GEOM;
  const [x0, x1] = xDomain(panel);
  const [y0, y1] = yDomain(panel, style.yScale);
  const xAxis = linearAxis(x0, x1, left, left + plotW, 5);
  const yAxis: AxisSpec =
    style.yScale === "log"
      ? logAxis(y0, y1, top + plotH, top)
      : linearAxis(y0, y1, top + plotH, top, 4);

  const parts: string[] = [];
  const clipId = `clip-${figure}-${index}`;
  parts.push(
    tag("clipPath", { id: clipId },
        tag("rect", { x: left, y: top, width: plotW, height: plotH })));

  parts.push(textEl(left + plotW / 2, 16, panel.title, {
    "text-anchor": "middle", "font-size": "12", "font-weight": "bold",
  }));

  if (style.gridlines) {
    for (const t of yAxis.ticks) {
      const y = yAxis.scale(t);
      parts.push(tag("line", {
        class: "gridline", x1: left, x2: left + plotW, y1: y, y2: y,
        stroke: "#d8d8d8", "stroke-width": "0.7",
      }));
    }
  }

  for (const t of xAxis.ticks) {
    const x = xAxis.scale(t);
    parts.push(tag("line", {
      x1: x, x2: x, y1: top + plotH, y2: top + plotH + 4,
      stroke: "#333", "stroke-width": "1",
    }));
    parts.push(textEl(x, top + plotH + 16, xAxis.fmt(t), {
      "text-anchor": "middle", "font-size": "10", fill: "#333",
    }));
  }
  for (const t of yAxis.ticks) {
    const y = yAxis.scale(t);
    parts.push(tag("line", {
      x1: left - 4, x2: left, y1: y, y2: y,
      stroke: "#333", "stroke-width": "1",
    }));
    parts.push(textEl(left - 7, y + 3.5, yAxis.fmt(t), {
      "text-anchor": "end", "font-size": "10", fill: "#333",
    }));
  }

  parts.push(textEl(left + plotW / 2, top + plotH + 34, xLabel, {
    "text-anchor": "middle", "font-size": "11", fill: "#111",
  }));
  parts.push(tag(
    "text",
    {
      x: 0, y: 0, "text-anchor": "middle", "font-size": "11", fill: "#111",
      transform: `translate(14,${px(top + plotH / 2)}) rotate(-90)`,
    },
    esc(yLabel),
  ));

  for (const curve of panel.curves) {
    const xs = curve.xs.map((v) => xAxis.scale(v));
    const ys = curve.ys.map((v) => yAxis.scale(v));
    parts.push(tag("path", {
      class: "curve", d: polyline(xs, ys), fill: "none",
      stroke: curve.color, "stroke-width": "1.3",
      "clip-path": `url(#${clipId})`, "data-label": curve.label,
    }));
    for (const m of curve.markers) {
      parts.push(tag("circle", {
        class: "peak", cx: xAxis.scale(m.x), cy: yAxis.scale(m.y),
        r: 2.6, fill: curve.color, stroke: "white", "stroke-width": "0.8",
      }));
    }
    if (curve.note) {
      const nx = Math.min(Math.max(xAxis.scale(curve.note.x), left + 12), left + plotW - 12);
      const ny = Math.max(yAxis.scale(curve.note.y) - 8, top + 10);
      parts.push(textEl(nx, ny, curve.note.text, {
        class: "classification", "text-anchor": "middle",
        "font-size": "10.5", "font-weight": "bold", fill: curve.color,
      }));
    }
  }

  panel.curves.forEach((curve, i) => {
    parts.push(textEl(left + plotW - 6, top + 13 + 13 * i, curve.label, {
      class: "legend", "text-anchor": "end", "font-size": "10", fill: curve.color,
    }));
  });

  parts.push(tag("rect", {
    x: left, y: top, width: plotW, height: plotH,
    fill: "none", stroke: "#333", "stroke-width": "1",
  }));

  const col = index % gridCols(figure);
  const row = Math.floor(index / gridCols(figure));
  return tag(
    "g",
    { class: "panel", transform: `translate(${col * CELL_W + 8},${row * CELL_H + 8})` },
    parts.join(""),
  );
}

function gridCols(figure: string): number {
  return figure === "fig3" ? 2 : 1;
}

function renderPanelFigure(figure: string, panels: Panel[], style: FigureStyle,
                           xLabel: string, yLabel: string): string {
  const cols = gridCols(figure);
  const rows = Math.ceil(panels.length / cols);
  const body = panels
    .map((p, i) => renderPanel(p, i, figure, style, xLabel, yLabel))
    .join("\n");
  return svgDocument(cols * CELL_W + 16, rows * CELL_H + 16, body);
}

// ------------------------------------------------------------------
// Spectrum figures (fig3, fig4, fig5)
// ------------------------------------------------------------------

interface SpectrumCurveSource {
  run: Run;
  mode: "full" | "rwa";
  report: PeakReport;
  rows: SpectrumRow[];
}

/** Every (run, mode) pair present in a run's peaks report. */
function spectrumSources(run: Run, modes: "all" | "primary"): SpectrumCurveSource[] {
  const reports = run.peaks().reports;
  const rows = run.spectrum();
  let keys = (Object.keys(reports) as ("full" | "rwa")[]).sort();
  if (modes === "primary" && keys.length > 1) {
    // regime figures compare baths, not dressing modes
    keys = ["full"];
  }
  return keys.map((mode) => {
    const sub = rows.filter((r) => r.mode === mode);
    if (sub.length === 0) {
      throw new SchemaError(`run ${run.label}: spectrum table has no ${mode} rows`);
    }
    return { run, mode, report: reports[mode]!, rows: sub };
  });
}

function spectrumCurve(src: SpectrumCurveSource, color: string,
                       style: FigureStyle): Curve {
  const cfg = src.run.manifest.config;
  const toX = style.xAxis === "rabi"
      ? (w: number) => (w - cfg.delta) / cfg.g
      : (w: number) => w;
  const peakHeights = src.report.peaks.map((p) => p.height);
  const scale = style.normalize
      ? 1 / Math.max(...src.rows.map((r) => r.power), ...peakHeights)
      : 1;
  const xs = src.rows.map((r) => toX(r.omega_ghz));
  const ys = src.rows.map((r) => r.power * scale);
  const markers = src.report.peaks.map((p) => ({
    x: toX(p.position_ghz),
    y: p.height * scale,
  }));
  const best = src.report.peaks.reduce((a, b) => (b.height > a.height ? b : a));
  return {
    label: `g = ${freqLabel(cfg.g)}`,
    xs,
    ys,
    color,
    markers,
    note: {
      x: toX(best.position_ghz),
      y: best.height * scale,
      text: src.report.classification,
    },
  };
}

function bySplitting(a: SpectrumCurveSource, b: SpectrumCurveSource): number {
  return a.run.manifest.config.g - b.run.manifest.config.g
      || a.run.label.localeCompare(b.run.label);
}

function buildFig3(runs: Run[], style: FigureStyle): string {
  const sources = runs.flatMap((r) => spectrumSources(r, "all"));
  const qs = [...new Set(sources.map((s) => s.run.manifest.config.q_factor))]
      .sort((a, b) => a - b);
  if (qs.length !== 2) {
    throw new SchemaError(
      `fig3 needs runs at exactly two quality factors, got [${qs.join(", ")}]`);
  }
  const panels: Panel[] = [];
  const tags = ["a", "b", "c", "d"];
  for (const q of qs) {
    for (const mode of ["full", "rwa"] as const) {
      const here = sources
        .filter((s) => s.run.manifest.config.q_factor === q && s.mode === mode)
        .sort(bySplitting);
      if (here.length === 0) {
        throw new SchemaError(`fig3: no runs for Q = ${PLAIN(q)}, mode ${mode}`);
      }
      panels.push({
        title: `(${tags[panels.length]}) Q = ${PLAIN(q)}, ${mode === "rwa" ? "RWA" : "full"}`,
        curves: here.map((s, i) => spectrumCurve(s, PALETTE[i % PALETTE.length], style)),
      });
    }
  }
  return renderPanelFigure("fig3", panels, style, xAxisLabel(style), spectrumYLabel(style));
}

function buildRegimeFigure(figure: "fig4" | "fig5", runs: Run[],
                           style: FigureStyle): string {
  const sources = runs.flatMap((r) => spectrumSources(r, "primary"));
  const panels: Panel[] = [];
  const layout = [
    ["lowfreq", "(a) low-frequency bath"],
    ["ohmic", "(b) Ohmic bath"],
  ] as const;
  for (const [kind, title] of layout) {
    const here = sources
      .filter((s) => s.run.manifest.config.intrinsic_kind === kind)
      .sort(bySplitting);
    if (here.length === 0) {
      throw new SchemaError(`${figure}: no runs with a ${kind} intrinsic bath`);
    }
    panels.push({
      title,
      curves: here.map((s, i) => spectrumCurve(s, PALETTE[i % PALETTE.length], style)),
    });
  }
  return renderPanelFigure(figure, panels, style, xAxisLabel(style), spectrumYLabel(style));
}

function xAxisLabel(style: FigureStyle): string {
  return style.xAxis === "rabi" ? "(ω − Δ) / g" : "ω (GHz)";
}

function spectrumYLabel(style: FigureStyle): string {
  return style.normalize ? "P(ω) / max" : "P(ω)";
}

// ------------------------------------------------------------------
// fig2: spectral densities
// ------------------------------------------------------------------

function buildFig2(runs: Run[], style: FigureStyle): string {
  const layout = [
    ["lowfreq", "(a) low-frequency bath"],
    ["ohmic", "(b) Ohmic bath"],
  ] as const;
  const panels: Panel[] = [];
  for (const [kind, title] of layout) {
    const here = runs.filter((r) => r.manifest.config.intrinsic_kind === kind);
    if (here.length === 0) {
      throw new SchemaError(`fig2: no runs with a ${kind} intrinsic bath`);
    }
    const curves: Curve[] = [];
    here.forEach((run) => {
      const cfg = run.manifest.config;
      const toX = style.xAxis === "rabi"
          ? (w: number) => (w - cfg.delta) / cfg.g
          : (w: number) => w;
      const rows = run.densities();
      const xs = rows.map((r) => toX(r.omega_ghz));
      curves.push({
        label: "intrinsic bath",
        xs,
        ys: rows.map((r) => r.j_intrinsic_ghz),
        color: PALETTE[0],
        markers: [],
      });
      curves.push({
        label: "cavity",
        xs,
        ys: rows.map((r) => r.j_cavity_ghz),
        color: PALETTE[1],
        markers: [],
      });
    });
    panels.push({ title, curves });
  }
  return renderPanelFigure("fig2", panels, style, xAxisLabel(style), "J(ω) (GHz)");
}

// ------------------------------------------------------------------
// table1: classification summary card
// ------------------------------------------------------------------

const REGIMES = ["weak", "strong", "ultra"] as const;

function cellMetric(cell: TableCell): string {
  if (cell.splitting_ghz !== null) return `split ${METRIC(cell.splitting_ghz)} GHz`;
  if (cell.shift_ghz !== null) {
    const sign = cell.shift_ghz >= 0 ? "+" : "";
    return `shift ${sign}${METRIC(cell.shift_ghz)} GHz`;
  }
  return "";
}

function buildTable1(cells: TableCell[]): string {
  const kinds = [...new Set(cells.map((c) => c.intrinsic))]
      .sort((a, b) => (a === "lowfreq" ? -1 : 1) - (b === "lowfreq" ? -1 : 1));
  const qs = [...new Set(cells.map((c) => c.q_factor))].sort((a, b) => b - a);
  const rows: { kind: string; q: number; byRegime: Map<string, TableCell> }[] = [];
  for (const kind of kinds) {
    for (const q of qs) {
      const byRegime = new Map<string, TableCell>();
      for (const cell of cells) {
        if (cell.intrinsic !== kind || cell.q_factor !== q) continue;
        if (byRegime.has(cell.regime)) {
          throw new SchemaError(
            `table1: duplicate cell for ${kind}, Q = ${PLAIN(q)}, ${cell.regime}`);
        }
        byRegime.set(cell.regime, cell);
      }
      if (byRegime.size === 0) continue;
      for (const regime of REGIMES) {
        if (!byRegime.has(regime)) {
          throw new SchemaError(
            `table1: missing ${regime} cell for ${kind}, Q = ${PLAIN(q)}`);
        }
      }
      rows.push({ kind, q, byRegime });
    }
  }
  if (rows.length === 0) {
    throw new SchemaError("table1: no cells");
  }

  const labelW = 170;
  const colW = 140;
  const rowH = 52;
  const headH = 58;
  const width = labelW + REGIMES.length * colW + 24;
  const height = headH + rows.length * rowH + 20;
  const parts: string[] = [];

  parts.push(textEl(width / 2, 22, "Emission line classification", {
    "text-anchor": "middle", "font-size": "13", "font-weight": "bold",
  }));
  REGIMES.forEach((regime, j) => {
    const cx = 12 + labelW + j * colW + colW / 2;
    const g = rows[0].byRegime.get(regime)!.g_ghz;
    parts.push(textEl(cx, headH - 18, regime, {
      "text-anchor": "middle", "font-size": "11", "font-weight": "bold",
    }));
    parts.push(textEl(cx, headH - 6, `g = ${freqLabel(g)}`, {
      "text-anchor": "middle", "font-size": "9.5", fill: "#555",
    }));
  });

  rows.forEach((row, i) => {
    const y = headH + i * rowH;
    const kindName = row.kind === "lowfreq" ? "low-frequency" : "Ohmic";
    parts.push(textEl(12, y + rowH / 2 - 2, kindName, {
      "font-size": "11", "font-weight": "bold",
    }));
    parts.push(textEl(12, y + rowH / 2 + 12, `Q = ${String(Math.round(row.q))}`, {
      "font-size": "10", fill: "#555",
    }));
    REGIMES.forEach((regime, j) => {
      const cell = row.byRegime.get(regime)!;
      const x = 12 + labelW + j * colW;
      const body: string[] = [];
      body.push(tag("rect", {
        x: x + 3, y: y + 3, width: colW - 6, height: rowH - 6,
        fill: "#f7f7f7", stroke: "#bbb", "stroke-width": "1", rx: 4,
      }));
      body.push(textEl(x + colW / 2, y + rowH / 2 - 1, cell.classification, {
        class: "classification", "text-anchor": "middle",
        "font-size": "13", "font-weight": "bold", fill: "#1f3b70",
      }));
      body.push(textEl(x + colW / 2, y + rowH / 2 + 14, cellMetric(cell), {
        "text-anchor": "middle", "font-size": "9.5", fill: "#555",
      }));
      parts.push(tag("g", { class: "cell", "data-label": cell.label }, body.join("")));
    });
  });

  const card = tag("g", { class: "panel" }, parts.join(""));
  return svgDocument(width, height, card);
}

// ------------------------------------------------------------------
// Entry point
// ------------------------------------------------------------------

export function renderFigure(job: FigureJob): string {
  if (job.figure === "table1") {
    if (job.inputs.length !== 1) {
      throw new SchemaError(
        `table1 takes exactly one input file, got ${job.inputs.length}`);
    }
    return buildTable1(readTable(job.inputs[0]).cells);
  }
  const runs = job.inputs.map((p) => new Run(p));
  switch (job.figure) {
    case "fig2":
      return buildFig2(runs, job.style);
    case "fig3":
      return buildFig3(runs, job.style);
    case "fig4":
    case "fig5":
      return buildRegimeFigure(job.figure, runs, job.style);
  }
}
