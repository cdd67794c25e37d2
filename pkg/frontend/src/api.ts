// Typed client for the session HTTP API. Fetch is injectable for tests.

export type Rgb8 = [number, number, number];

export interface SessionMeta {
  schema_version: number;
  participant_label: string;
  n_trials: number;
  seed: number;
  config_hash: string;
  alternation_hz: number;
  square_cm: number;
  distance_cm: number;
  px_per_cm: number | null;
  square_px: number | null;
  answered: number[];
  completed: boolean;
}

export interface TrialPayload {
  trial_index: number;
  kind: "vibration" | "catch";
  break_after: boolean;
  alternation_hz: number;
  square_px: number | null;
  n_trials: number;
  plus?: Rgb8;
  minus?: Rgb8;
  catch?: Rgb8;
}

export interface ResponseBody {
  trial_index: number;
  detected: boolean;
  response_ms: number;
  achieved_hz?: number;
}

export interface Report {
  alpha: number | null;
  beta: number | null;
  converged: boolean;
  log_likelihood: number | null;
  threshold_50: number | null;
  n_catch: number;
  n_false_alarm: number;
  false_alarm_rate: number;
  suspect: boolean;
}

export class ApiError extends Error {
  constructor(readonly status: number, readonly detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

/** What the experiment flow needs from the server; ApiClient is the real one. */
export interface SessionApi {
  session(): Promise<SessionMeta>;
  trial(index: number): Promise<TrialPayload>;
  report(): Promise<Report>;
  postResponse(
    body: ResponseBody,
    retries?: number,
    retryDelayMs?: number,
  ): Promise<"delivered" | "duplicate">;
}

const sleep = (ms: number) =>
  ms > 0 ? new Promise((r) => setTimeout(r, ms)) : Promise.resolve();

export class ApiClient implements SessionApi {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(this.base + path);
    if (!resp.ok) throw new ApiError(resp.status, await resp.text());
    return (await resp.json()) as T;
  }

  session(): Promise<SessionMeta> {
    return this.getJson("/api/session");
  }

  trial(index: number): Promise<TrialPayload> {
    return this.getJson(`/api/trial/${index}`);
  }

  report(): Promise<Report> {
    return this.getJson("/api/report");
  }

  /**
   * Deliver one response, retrying transient failures. The server enforces
   * one answer per trial, so a 409 means an earlier attempt already landed
   * and the response counts as delivered.
   */
  async postResponse(
    body: ResponseBody,
    retries = 3,
    retryDelayMs = 250,
  ): Promise<"delivered" | "duplicate"> {
    let lastError: unknown = null;
    for (let attempt = 0; attempt <= retries; attempt++) {
      if (attempt > 0) await sleep(retryDelayMs);
      try {
        const resp = await this.fetchFn(this.base + "/api/response", {
          method: "POST",
          headers: { "Content-Type": "application/json" },
          body: JSON.stringify(body),
        });
        if (resp.status === 204) return "delivered";
        if (resp.status === 409) return "duplicate";
        // 400/404 are caller bugs; retrying cannot help
        throw new ApiError(resp.status, await resp.text());
      } catch (err) {
        if (err instanceof ApiError) throw err;
        lastError = err; // network hiccup: retry
      }
    }
    throw lastError instanceof Error ? lastError : new Error(String(lastError));
  }
}
