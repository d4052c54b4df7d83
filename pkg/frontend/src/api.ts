/** Typed client for the scoring service. Pure API passthrough: every number
 * shown in the UI originates from one of these responses. */

export interface HealthResponse {
  status: string;
  archive_loaded: boolean;
}

export interface ThetaEntry {
  cluster: number;
  label: string;
  probability: number;
}

export interface ScoreResponse {
  theta: ThetaEntry[];
  expected_activity: number;
  viral_probability: number;
  model_version: string;
}

export interface CompareResponse {
  a: ScoreResponse;
  b: ScoreResponse;
  delta_theta: number[];
  delta_expected_activity: number;
  delta_viral_probability: number;
  model_version: string;
}

export interface ClusterSummary {
  cluster: number;
  frequency: number;
  average: number;
  variance: number;
  label: string;
  viral: boolean;
}

/** Non-2xx response; status and the service's detail string. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
    this.name = "ApiError";
  }
}

/** fetch itself failed: server unreachable, DNS, aborted. */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(cause instanceof Error ? cause.message : String(cause));
    this.name = "NetworkError";
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let res: Response;
  try {
    res = await fetch(url, init);
  } catch (err) {
    throw new NetworkError(err);
  }
  if (!res.ok) {
    let detail = res.statusText || `HTTP ${res.status}`;
    try {
      const body = (await res.json()) as { detail?: string };
      if (typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body, keep the status text
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

export class ViralensClient {
  /** base "" means same-origin; anything else is prefixed verbatim. */
  constructor(readonly base: string = "") {}

  health(): Promise<HealthResponse> {
    return request(`${this.base}/healthz`);
  }

  clusters(): Promise<ClusterSummary[]> {
    return request(`${this.base}/api/clusters`);
  }

  score(image: Blob): Promise<ScoreResponse> {
    const form = new FormData();
    form.append("image", image);
    return request(`${this.base}/api/score`, { method: "POST", body: form });
  }

  compare(imageA: Blob, imageB: Blob): Promise<CompareResponse> {
    const form = new FormData();
    form.append("image_a", imageA);
    form.append("image_b", imageB);
    return request(`${this.base}/api/compare`, { method: "POST", body: form });
  }
}
