/** Session view state and its reducer.
 *
 * Invariants kept here:
 *  - the posterior version list is append-only and each entry is tagged
 *    with its data window, straight from the payload;
 *  - the stale flag is set whenever the plan or the posterior changed
 *    after the last prediction was rendered.
 */

import type {
  CreatePatientResponse,
  CycleRequest,
  PlanCycle,
  PosteriorPayload,
  PredictResponse,
  PriorPayload,
} from "./types.js";

export interface SessionView {
  patientId: string | null;
  prior: PriorPayload | null;
  cycles: CycleRequest[];
  versions: PosteriorPayload[];
  plan: PlanCycle[];
  planSeed: number;
  lastPrediction: PredictResponse | null;
  stale: boolean;
  banner: string | null;
}

export type Action =
  | { kind: "session_created"; payload: CreatePatientResponse }
  | { kind: "cycle_accepted"; cycle: CycleRequest }
  | { kind: "posterior_received"; payload: PosteriorPayload }
  | { kind: "plan_changed"; plan: PlanCycle[]; seed?: number }
  | { kind: "prediction_received"; payload: PredictResponse }
  | { kind: "server_error"; message: string }
  | { kind: "banner_dismissed" };

export function initialSession(): SessionView {
  return {
    patientId: null,
    prior: null,
    cycles: [],
    versions: [],
    plan: [],
    planSeed: 0,
    lastPrediction: null,
    stale: false,
    banner: null,
  };
}

export function reduce(state: SessionView, action: Action): SessionView {
  switch (action.kind) {
    case "session_created":
      return {
        ...initialSession(),
        patientId: action.payload.patient_id,
        prior: action.payload.prior,
      };
    case "cycle_accepted":
      return { ...state, cycles: [...state.cycles, action.cycle], banner: null };
    case "posterior_received": {
      const last = state.versions[state.versions.length - 1];
      if (last !== undefined && action.payload.version <= last.version) {
        return state; // stale response for an already-rendered version
      }
      return {
        ...state,
        versions: [...state.versions, action.payload],
        stale: state.lastPrediction !== null,
        banner: null,
      };
    }
    case "plan_changed":
      return {
        ...state,
        plan: action.plan,
        planSeed: action.seed ?? state.planSeed,
        stale: state.lastPrediction !== null,
      };
    case "prediction_received":
      return { ...state, lastPrediction: action.payload, stale: false, banner: null };
    case "server_error":
      return { ...state, banner: action.message };
    case "banner_dismissed":
      return { ...state, banner: null };
  }
}
