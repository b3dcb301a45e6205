/**
 * Minimal string-level SVG assembly.  No DOM: every element is built
 * as text so the renderer stays deterministic and runs under plain
 * node.  Scales and tick placement come from d3-scale.
 */

import { scaleLinear, scaleLog, type ScaleContinuousNumeric } from "d3-scale";
import { format } from "d3-format";

export type Attrs = Record<string, string | number>;

const ESCAPES: Record<string, string> = {
  "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;",
};

export function esc(s: string): string {
  return s.replace(/[&<>"]/g, (c) => ESCAPES[c]);
}

/** Fixed-precision coordinate so payloads stay small and reproducible. */
export function px(v: number): string {
  const r = v.toFixed(2);
  return r === "-0.00" ? "0.00" : r;
}

export function tag(name: string, attrs: Attrs, ...children: string[]): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? px(v) : esc(v)}"`)
    .join(" ");
  const open = parts ? `<${name} ${parts}>` : `<${name}>`;
  if (children.length === 0) return open.replace(/>$/, "/>");
  return `${open}${children.join("")}</${name}>`;
}

export function textEl(x: number, y: number, content: string, attrs: Attrs = {}): string {
  return tag("text", { x, y, ...attrs }, esc(content));
}

export interface AxisSpec {
  scale: ScaleContinuousNumeric<number, number>;
  ticks: number[];
  fmt: (v: number) => string;
}

const SI = format("~s");
const PLAIN = format("~g");

/** Tick label formatter: plain numbers in a sane range, SI prefix outside. */
export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e-3 && a < 1e4) return PLAIN(v);
  return SI(v);
}

export function linearAxis(lo: number, hi: number, rangeLo: number, rangeHi: number,
                           count = 5): AxisSpec {
  const scale = scaleLinear().domain([lo, hi]).range([rangeLo, rangeHi]);
  return { scale, ticks: scale.ticks(count), fmt: tickLabel };
}

export function logAxis(lo: number, hi: number, rangeLo: number, rangeHi: number): AxisSpec {
  const scale = scaleLog().domain([lo, hi]).range([rangeLo, rangeHi]);
  let ticks = scale.ticks(5).filter((t) => Number.isInteger(Math.log10(t)));
  // dense decade ranges keep every decade; sparse ones fall back to d3
  if (ticks.length < 2) ticks = scale.ticks(5);
  return { scale, ticks, fmt: (v) => format(".0e")(v) };
}

/** Polyline path, skipping non-finite points (gaps, log of zero). */
export function polyline(xs: number[], ys: number[]): string {
  const parts: string[] = [];
  let pen = false;
  for (let i = 0; i < xs.length; i++) {
    if (!Number.isFinite(xs[i]) || !Number.isFinite(ys[i])) {
      pen = false;
      continue;
    }
    parts.push(`${pen ? "L" : "M"}${px(xs[i])},${px(ys[i])}`);
    pen = true;
  }
  return parts.join("");
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];

export function svgDocument(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    body,
    "</svg>",
  ].join("\n");
}
