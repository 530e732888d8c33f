/** JSON payload shapes of the monitoring service. Every number the UI
 * displays originates in one of these structures. */

/** Probability per grid level, keyed by the level value as a string. */
export type PmfPayload = Record<string, number>;

export interface PriorPayload {
  alpha: PmfPayload;
  gamma: PmfPayload;
  tau: PmfPayload;
  a: number;
  b: number;
  draw_count: number;
}

export interface CreatePatientResponse {
  patient_id: string;
  prior: PriorPayload;
}

export interface PosteriorPayload {
  version: number;
  data_window: number[];
  marginals: { alpha: PmfPayload; gamma: PmfPayload; tau: PmfPayload };
  draw_count: number;
  seed: number;
  digest: string;
}

export interface CycleRequest {
  cycle_index: number;
  dose_std: number;
  t0: number;
  /** raw pre-cycle white-cell count */
  w0: number;
  times: number[];
  /** raw counts, same length as times */
  wbc: number[];
}

export interface CycleAccepted {
  patient_id: string;
  data_window: number[];
}

export interface PlanCycle {
  cycle_index: number;
  dose_std: number;
  offsets: number[];
}

export interface PredictRequest {
  cycles: PlanCycle[];
  seed: number;
  noise: boolean;
  w0_policy: "last_observed" | "normal";
  version?: number;
}

export interface BandPoint {
  cycle_index: number;
  offset: number;
  quantiles: Record<string, number>;
}

export interface CloudPoint {
  cycle_index: number;
  offset: number;
  value: number;
}

export interface PredictResponse {
  version: number;
  seed: number;
  levels: number[];
  bands: BandPoint[];
  points: CloudPoint[];
  posterior_digest: string;
}

export interface FieldError {
  field: string;
  message: string;
}

export interface ErrorBody {
  detail: string;
  errors?: FieldError[];
}
