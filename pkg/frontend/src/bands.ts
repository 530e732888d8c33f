/** Band chart geometry: turn the service's quantile payload into
 * plottable series, one per planned cycle. Pure data transformation — no
 * value is invented, only regrouped. */

import type { BandPoint, CloudPoint } from "./types.js";

export interface BandSeries {
  cycleIndex: number;
  offsets: number[];
  lower: number[];
  median: number[];
  upper: number[];
}

export function bandSeries(bands: BandPoint[], levels: number[]): BandSeries[] {
  if (levels.length < 2) {
    throw new Error("need at least two quantile levels for a band");
  }
  const lowerLevel = Math.min(...levels);
  const upperLevel = Math.max(...levels);
  const medianLevel = levels.includes(50) ? 50 : lowerLevel;
  const byCycle = new Map<number, BandPoint[]>();
  for (const point of bands) {
    const group = byCycle.get(point.cycle_index) ?? [];
    group.push(point);
    byCycle.set(point.cycle_index, group);
  }
  const series: BandSeries[] = [];
  for (const [cycleIndex, group] of [...byCycle.entries()].sort((a, b) => a[0] - b[0])) {
    const ordered = [...group].sort((a, b) => a.offset - b.offset);
    series.push({
      cycleIndex,
      offsets: ordered.map((p) => p.offset),
      lower: ordered.map((p) => quantile(p, lowerLevel)),
      median: ordered.map((p) => quantile(p, medianLevel)),
      upper: ordered.map((p) => quantile(p, upperLevel)),
    });
  }
  return series;
}

function quantile(point: BandPoint, level: number): number {
  // payload keys are the levels formatted as strings (e.g. "5.0")
  for (const [key, value] of Object.entries(point.quantiles)) {
    if (parseFloat(key) === level) return value;
  }
  throw new Error(`quantile level ${level} missing at offset ${point.offset}`);
}

/** A band is flat when every quantile at every offset equals the same
 * value (the zero-dose degenerate case). */
export function isFlatBand(series: BandSeries, tolerance = 1e-9): boolean {
  const all = [...series.lower, ...series.median, ...series.upper];
  if (all.length === 0) return false;
  const first = all[0]!;
  return all.every((v) => Math.abs(v - first) <= tolerance);
}

export interface ScatterPoint {
  x: number;
  y: number;
  cycleIndex: number;
}

export function scatterPoints(points: CloudPoint[]): ScatterPoint[] {
  return points.map((p) => ({ x: p.offset, y: p.value, cycleIndex: p.cycle_index }));
}
