/** Thin HTTP client for the monitoring service. The injectable fetch
 * makes every test run against recorded traffic. */

import type {
  CreatePatientResponse,
  CycleAccepted,
  CycleRequest,
  ErrorBody,
  PosteriorPayload,
  PredictRequest,
  PredictResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ErrorBody,
  ) {
    super(body.detail);
  }
}

export class MonitorClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const parsed = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, parsed as ErrorBody);
    }
    return parsed as T;
  }

  createPatient(patientId: string, collapseCount = 10_000, seed = 0): Promise<CreatePatientResponse> {
    return this.request("POST", "/patients", {
      patient_id: patientId,
      collapse_count: collapseCount,
      seed,
    });
  }

  addCycle(patientId: string, cycle: CycleRequest): Promise<CycleAccepted> {
    return this.request("POST", `/patients/${patientId}/cycles`, cycle);
  }

  update(patientId: string, seed?: number): Promise<PosteriorPayload> {
    return this.request("POST", `/patients/${patientId}/update`, seed === undefined ? {} : { seed });
  }

  getPosterior(patientId: string, version?: number): Promise<PosteriorPayload> {
    const query = version === undefined ? "" : `?version=${version}`;
    return this.request("GET", `/patients/${patientId}/posterior${query}`);
  }

  predict(patientId: string, plan: PredictRequest): Promise<PredictResponse> {
    return this.request("POST", `/patients/${patientId}/predict`, plan);
  }
}
