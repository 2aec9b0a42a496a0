// Typed client for the local analysis service. At most one recover request is
// in flight: a newer call aborts the previous one.

import { FeatureFile, validateFeatureFile } from "./schema.js";
import { CurveEditPayload, RecoveryView } from "./state.js";

export interface RecoverOptions {
  tonality?: number;
  alpha?: number;
  beta?: number;
  gamma?: number;
  beam_width?: number;
  min_notes?: number;
  max_notes?: number;
  quality_filter?: string[];
}

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  private recoverController: AbortController | null = null;

  constructor(
    readonly baseUrl: string = "http://127.0.0.1:8621",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async post(path: string, body: unknown, signal?: AbortSignal): Promise<unknown> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
        signal,
      });
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") {
        throw err;
      }
      throw new ApiError(`service unreachable: ${String(err)}`, null);
    }
    if (!response.ok) {
      const detail = await response.text();
      throw new ApiError(`${path} failed (${response.status}): ${detail}`, response.status);
    }
    return response.json();
  }

  async analyze(score: unknown): Promise<FeatureFile> {
    return validateFeatureFile(await this.post("/analyze", score));
  }

  async edit(features: FeatureFile, edits: CurveEditPayload[]): Promise<FeatureFile> {
    return validateFeatureFile(await this.post("/edit", { features, edits }));
  }

  /** Later calls cancel any recover request still in flight. */
  async recover(features: FeatureFile, options: RecoverOptions = {}): Promise<RecoveryView> {
    this.recoverController?.abort();
    const controller = new AbortController();
    this.recoverController = controller;
    try {
      const raw = (await this.post(
        "/recover",
        { features, ...options },
        controller.signal,
      )) as RecoveryView & { achieved: unknown };
      return {
        chords: raw.chords,
        spellings: raw.spellings,
        total_cost: raw.total_cost,
        per_step_rd: raw.per_step_rd,
      };
    } finally {
      if (this.recoverController === controller) {
        this.recoverController = null;
      }
    }
  }

  async metrics(chords: string[][], melody?: unknown): Promise<unknown> {
    return this.post("/metrics", { chords, melody });
  }

  async library(params: Record<string, string>): Promise<unknown> {
    const query = new URLSearchParams(params).toString();
    const response = await this.fetchImpl(`${this.baseUrl}/library?${query}`);
    if (!response.ok) {
      throw new ApiError(`/library failed (${response.status})`, response.status);
    }
    return response.json();
  }

  async manifest(): Promise<unknown> {
    const response = await this.fetchImpl(`${this.baseUrl}/manifest`);
    if (!response.ok) {
      throw new ApiError(`/manifest failed (${response.status})`, response.status);
    }
    return response.json();
  }
}
