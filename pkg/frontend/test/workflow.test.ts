import { describe, expect, it } from "vitest";

import { ApiError, MonitorClient } from "../src/client.js";
import { renderDashboard } from "../src/render.js";
import { initialSession, reduce, type SessionView } from "../src/state.js";
import type { CycleRequest } from "../src/types.js";
import { loadSession, rejectAllFetch, replayFetch } from "./replay.js";

const session = loadSession();

async function playUpdates(): Promise<SessionView> {
  const client = new MonitorClient("", replayFetch(session.slice(0, 5)));
  let view = initialSession();
  view = reduce(view, { kind: "session_created", payload: await client.createPatient("demo", 2000) });
  for (const step of [1, 3]) {
    const cycle = session[step]!.request as CycleRequest;
    await client.addCycle("demo", cycle);
    view = reduce(view, { kind: "cycle_accepted", cycle });
    view = reduce(view, { kind: "posterior_received", payload: await client.update("demo") });
  }
  return view;
}

describe("cycle entry workflow", () => {
  it("renders a new posterior version after each valid cycle entry", async () => {
    const client = new MonitorClient("", replayFetch(session.slice(0, 3)));
    let view = initialSession();
    view = reduce(view, {
      kind: "session_created",
      payload: await client.createPatient("demo", 2000),
    });
    expect(renderDashboard(view).timeline).toHaveLength(0);
    expect(renderDashboard(view).emptyTimelinePrompt).toBe(true);

    const cycle = session[1]!.request as CycleRequest;
    await client.addCycle("demo", cycle);
    view = reduce(view, { kind: "cycle_accepted", cycle });
    view = reduce(view, { kind: "posterior_received", payload: await client.update("demo") });

    const dashboard = renderDashboard(view);
    expect(dashboard.timeline).toHaveLength(1);
    expect(dashboard.timeline[0]!.version).toBe(1);
    expect(dashboard.timeline[0]!.dataWindow).toEqual([1]);
    expect(dashboard.emptyTimelinePrompt).toBe(false);
  });

  it("tags each version with a strictly growing data window", async () => {
    const view = await playUpdates();
    const windows = renderDashboard(view).timeline.map((row) => row.dataWindow);
    expect(windows).toEqual([[1], [1, 2]]);
  });

  it("pmf bars sum to one per parameter per version", async () => {
    const view = await playUpdates();
    for (const row of renderDashboard(view).timeline) {
      for (const bars of Object.values(row.bars)) {
        const total = bars.reduce((acc, bar) => acc + bar.probability, 0);
        expect(total).toBeCloseTo(1, 9);
      }
    }
  });

  it("blocks invalid input locally: wbc = 0 gives an inline error and no request", async () => {
    const client = new MonitorClient("", rejectAllFetch());
    const bad: CycleRequest = {
      cycle_index: 1,
      dose_std: 10,
      t0: 0,
      w0: 2980,
      times: [2, 4],
      wbc: [1200, 0],
    };
    const { validateCycleForm } = await import("../src/validate.js");
    const errors = validateCycleForm(bad);
    expect(errors).toEqual([{ field: "wbc.1", message: "counts must be positive" }]);
    // the form never submits when validation fails, so the client is untouched
    if (errors.length === 0) await client.addCycle("demo", bad);
  });

  it("rejects non-increasing observation times locally", async () => {
    const { validateCycleForm } = await import("../src/validate.js");
    const errors = validateCycleForm({
      cycle_index: 1,
      dose_std: 10,
      t0: 0,
      w0: 2980,
      times: [4, 2],
      wbc: [1200, 900],
    });
    expect(errors.some((e) => e.field === "times.1")).toBe(true);
  });

  it("surfaces a server 409 as an actionable banner", async () => {
    const fetch409 = async () =>
      new Response(JSON.stringify({ detail: "no cycles recorded yet; POST a cycle first" }), {
        status: 409,
        headers: { "content-type": "application/json" },
      });
    const client = new MonitorClient("", fetch409);
    let view = initialSession();
    try {
      await client.update("demo");
      expect.unreachable("update should have failed");
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      view = reduce(view, { kind: "server_error", message: (error as ApiError).message });
    }
    expect(renderDashboard(view).banner).toContain("POST a cycle first");
  });

  it("maps a 400 body onto field paths", async () => {
    const fetch400 = async () =>
      new Response(
        JSON.stringify({
          detail: "invalid body",
          errors: [{ field: "wbc", message: "Input should be a valid list" }],
        }),
        { status: 400, headers: { "content-type": "application/json" } },
      );
    const client = new MonitorClient("", fetch400);
    try {
      await client.addCycle("demo", session[1]!.request as CycleRequest);
      expect.unreachable("addCycle should have failed");
    } catch (error) {
      const apiError = error as ApiError;
      expect(apiError.status).toBe(400);
      expect(apiError.body.errors?.[0]?.field).toBe("wbc");
    }
  });
});
