// Diverging color scales anchored at zero. Day cells and node fills always
// map value 0 to the exact neutral color; positive and negative values ramp
// toward opposite endpoints, normalized per taxpayer per period so the same
// taxpayer looks consistent across details.

import type { ProfitStatus } from "./api";
import type { ColorScheme } from "./state";

interface Ramp {
  negative: string;
  neutral: string;
  positive: string;
}

// brown-blue-green is the colorblind-friendly default; red-yellow-green
// follows the Chinese stock market convention (red profit, green loss).
export const RAMPS: Record<ColorScheme, Ramp> = {
  "brown-blue-green": { negative: "#8c510a", neutral: "#f5f5f5", positive: "#01665e" },
  "red-yellow-green": { negative: "#1a9850", neutral: "#ffffbf", positive: "#d73027" },
};

export const NODE_BORDER: Record<string, string> = {
  taxpayer: "#2c7fb8",
  investor: "#e08214",
  both: "#7b3294",
};

export const INVESTMENT_EDGE_COLOR = "#e08214"; // orange, like investor borders
export const RPT_EDGE_COLOR = "#2c7fb8"; // blue, like taxpayer borders

function hexToRgb(hex: string): [number, number, number] {
  return [
    parseInt(hex.slice(1, 3), 16),
    parseInt(hex.slice(3, 5), 16),
    parseInt(hex.slice(5, 7), 16),
  ];
}

function mix(from: string, to: string, t: number): string {
  const a = hexToRgb(from);
  const b = hexToRgb(to);
  const channel = (i: number) => Math.round(a[i] + (b[i] - a[i]) * t);
  return "#" + [0, 1, 2].map((i) => channel(i).toString(16).padStart(2, "0")).join("");
}

export function divergingColor(value: number, maxAbs: number, scheme: ColorScheme): string {
  const ramp = RAMPS[scheme];
  if (value === 0 || maxAbs <= 0) {
    return ramp.neutral;
  }
  const t = Math.min(1, Math.abs(value) / maxAbs);
  return value > 0 ? mix(ramp.neutral, ramp.positive, t) : mix(ramp.neutral, ramp.negative, t);
}

export function statusColor(status: ProfitStatus, scheme: ColorScheme): string {
  const ramp = RAMPS[scheme];
  if (status === "profit") return ramp.positive;
  if (status === "loss") return ramp.negative;
  return ramp.neutral;
}

export function maxAbsOf(values: number[]): number {
  let best = 0;
  for (const v of values) {
    const a = Math.abs(v);
    if (a > best) best = a;
  }
  return best;
}
