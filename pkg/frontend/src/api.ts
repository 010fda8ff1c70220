// Service client. At most one synthesis request is ever in flight; a
// click during synthesis supersedes any queued one instead of stacking.

import {
  DictionaryManifest,
  GestureScript,
  SynthesisOptions,
  SynthesisResponse,
  TimingFile,
} from "./types.js";

export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ServiceClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (...args) =>
      fetch(...(args as [string])),
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const payload = await resp.json();
    if (!resp.ok) {
      const message = (payload as { error?: string }).error
        ?? `HTTP ${resp.status}`;
      throw new Error(message);
    }
    return payload as T;
  }

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`);
    const payload = await resp.json();
    if (!resp.ok) {
      const message = (payload as { error?: string }).error
        ?? `HTTP ${resp.status}`;
      throw new Error(message);
    }
    return payload as T;
  }

  parse(text: string, timings: TimingFile): Promise<GestureScript> {
    return this.post("/api/parse", { text, timings });
  }

  synthesize(script: GestureScript,
             options: SynthesisOptions): Promise<SynthesisResponse> {
    return this.post("/api/synthesize", { script, options });
  }

  dictionary(): Promise<DictionaryManifest> {
    return this.get("/api/dictionary");
  }
}

interface PendingJob {
  script: GestureScript;
  options: SynthesisOptions;
  resolvers: {
    resolve: (r: SynthesisResponse) => void;
    reject: (e: unknown) => void;
  }[];
}

/**
 * Serializes synthesize calls: while one runs, later submissions collapse
 * into a single pending job (the latest script wins) that fires when the
 * current request settles.
 */
export class SynthesisQueue {
  private inFlight = false;
  private pending: PendingJob | null = null;

  constructor(private client: ServiceClient) {}

  get busy(): boolean {
    return this.inFlight;
  }

  submit(script: GestureScript,
         options: SynthesisOptions): Promise<SynthesisResponse> {
    return new Promise((resolve, reject) => {
      if (this.inFlight) {
        if (this.pending) {
          // superseded: the old pending job resolves with the new result
          this.pending.script = script;
          this.pending.options = options;
          this.pending.resolvers.push({ resolve, reject });
        } else {
          this.pending = { script, options,
                           resolvers: [{ resolve, reject }] };
        }
        return;
      }
      this.run(script, options, [{ resolve, reject }]);
    });
  }

  private run(script: GestureScript, options: SynthesisOptions,
              resolvers: PendingJob["resolvers"]): void {
    this.inFlight = true;
    this.client
      .synthesize(script, options)
      .then((result) => resolvers.forEach((r) => r.resolve(result)))
      .catch((err) => resolvers.forEach((r) => r.reject(err)))
      .finally(() => {
        this.inFlight = false;
        const next = this.pending;
        this.pending = null;
        if (next) this.run(next.script, next.options, next.resolvers);
      });
  }
}
