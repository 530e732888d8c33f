/** Render the session view into plain display structures. Every number
 * here is copied from a service payload field; nothing is computed
 * client-side beyond grouping and ordering, so displayed values are
 * always traceable to the service. */

import { bandSeries, isFlatBand, scatterPoints, type BandSeries, type ScatterPoint } from "./bands.js";
import type { SessionView } from "./state.js";
import type { PmfPayload } from "./types.js";

export interface Bar {
  level: string;
  probability: number;
}

export interface TimelineRow {
  version: number;
  dataWindow: number[];
  bars: { alpha: Bar[]; gamma: Bar[]; tau: Bar[] };
}

export interface ChartView {
  series: BandSeries[];
  points: ScatterPoint[];
  flat: boolean[];
  stale: boolean;
  seed: number;
}

export interface DashboardView {
  patientId: string | null;
  enteredCycles: number[];
  timeline: TimelineRow[];
  chart: ChartView | null;
  banner: string | null;
  emptyTimelinePrompt: boolean;
}

function bars(pmf: PmfPayload): Bar[] {
  return Object.entries(pmf)
    .sort(([a], [b]) => parseFloat(a) - parseFloat(b))
    .map(([level, probability]) => ({ level, probability }));
}

export function renderTimeline(view: SessionView): TimelineRow[] {
  return view.versions.map((v) => ({
    version: v.version,
    dataWindow: [...v.data_window],
    bars: {
      alpha: bars(v.marginals.alpha),
      gamma: bars(v.marginals.gamma),
      tau: bars(v.marginals.tau),
    },
  }));
}

export function renderChart(view: SessionView): ChartView | null {
  const prediction = view.lastPrediction;
  if (prediction === null) return null;
  const series = bandSeries(prediction.bands, prediction.levels);
  return {
    series,
    points: scatterPoints(prediction.points),
    flat: series.map((s) => isFlatBand(s)),
    stale: view.stale,
    seed: prediction.seed,
  };
}

export function renderDashboard(view: SessionView): DashboardView {
  return {
    patientId: view.patientId,
    enteredCycles: view.cycles.map((c) => c.cycle_index),
    timeline: renderTimeline(view),
    chart: renderChart(view),
    banner: view.banner,
    emptyTimelinePrompt: view.versions.length === 0,
  };
}
