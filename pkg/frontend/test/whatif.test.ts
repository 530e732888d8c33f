import { describe, expect, it } from "vitest";

import { MonitorClient } from "../src/client.js";
import { renderChart } from "../src/render.js";
import { initialSession, reduce, type SessionView } from "../src/state.js";
import type { PlanCycle, PosteriorPayload, PredictRequest, PredictResponse } from "../src/types.js";
import { loadSession, replayFetch } from "./replay.js";

const session = loadSession();
const posteriorV2 = session[4]!.response as PosteriorPayload;

function viewWithPosterior(): SessionView {
  let view = initialSession();
  view = { ...view, patientId: "demo" };
  return reduce(view, { kind: "posterior_received", payload: posteriorV2 });
}

describe("what-if panel", () => {
  it("dose slider at zero with noise off renders a flat band", async () => {
    const client = new MonitorClient("", replayFetch([session[8]!]));
    const request = session[8]!.request as PredictRequest;
    expect(request.cycles.every((c) => c.dose_std === 0)).toBe(true);
    expect(request.noise).toBe(false);

    let view = viewWithPosterior();
    view = reduce(view, { kind: "plan_changed", plan: request.cycles, seed: request.seed });
    view = reduce(view, {
      kind: "prediction_received",
      payload: await client.predict("demo", request),
    });

    const chart = renderChart(view)!;
    expect(chart.flat).toEqual([true]);
    // flat at the w0-policy value: every band number equals the first one
    const value = chart.series[0]!.median[0]!;
    for (const s of chart.series) {
      for (const v of [...s.lower, ...s.median, ...s.upper]) {
        expect(v).toBeCloseTo(value, 9);
      }
    }
  });

  it("two predicts with the same plan and seed render identical chart data", async () => {
    const client = new MonitorClient("", replayFetch([session[6]!, session[7]!]));
    const request = session[6]!.request as PredictRequest;
    expect(session[7]!.request).toEqual(request);

    let view = viewWithPosterior();
    view = reduce(view, { kind: "plan_changed", plan: request.cycles, seed: request.seed });
    view = reduce(view, {
      kind: "prediction_received",
      payload: await client.predict("demo", request),
    });
    const first = renderChart(view);
    view = reduce(view, {
      kind: "prediction_received",
      payload: await client.predict("demo", request),
    });
    const second = renderChart(view);
    expect(second).toEqual(first);
  });

  it("stale flag flips when the plan changes after a predict and clears on re-predict", async () => {
    const prediction = session[6]!.response as PredictResponse;
    let view = viewWithPosterior();
    view = reduce(view, { kind: "prediction_received", payload: prediction });
    expect(renderChart(view)!.stale).toBe(false);

    const editedPlan: PlanCycle[] = [{ cycle_index: 3, dose_std: 5, offsets: [2, 6, 10] }];
    view = reduce(view, { kind: "plan_changed", plan: editedPlan });
    expect(renderChart(view)!.stale).toBe(true);

    view = reduce(view, { kind: "prediction_received", payload: prediction });
    expect(renderChart(view)!.stale).toBe(false);
  });

  it("stale flag flips when a new posterior version arrives after a predict", () => {
    let view = viewWithPosterior();
    view = reduce(view, { kind: "prediction_received", payload: session[6]!.response as PredictResponse });
    expect(view.stale).toBe(false);
    const next: PosteriorPayload = { ...posteriorV2, version: posteriorV2.version + 1 };
    view = reduce(view, { kind: "posterior_received", payload: next });
    expect(view.stale).toBe(true);
  });

  it("band ordering is lower <= median <= upper at every offset", () => {
    let view = viewWithPosterior();
    view = reduce(view, { kind: "prediction_received", payload: session[6]!.response as PredictResponse });
    for (const s of renderChart(view)!.series) {
      s.offsets.forEach((_, i) => {
        expect(s.lower[i]!).toBeLessThanOrEqual(s.median[i]!);
        expect(s.median[i]!).toBeLessThanOrEqual(s.upper[i]!);
      });
    }
  });
});
