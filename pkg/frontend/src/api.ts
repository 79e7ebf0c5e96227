import type { PredictionResponse } from "./types.js";

/** Thin client for the inference service; fetch is injectable for tests. */
export class ServiceClient {
  constructor(
    private baseUrl: string,
    private fetchFn: typeof fetch = globalThis.fetch,
  ) {}

  setBaseUrl(url: string): void {
    this.baseUrl = url;
  }

  async health(): Promise<{ status: string; model: string }> {
    const r = await this.fetchFn(`${this.baseUrl}/health`);
    if (!r.ok) throw new Error(`health: HTTP ${r.status}`);
    return r.json();
  }

  async labels(): Promise<string[]> {
    const r = await this.fetchFn(`${this.baseUrl}/labels`);
    if (!r.ok) throw new Error(`labels: HTTP ${r.status}`);
    return r.json();
  }

  async predict(frame: Blob, k = 3): Promise<PredictionResponse> {
    const r = await this.fetchFn(`${this.baseUrl}/predict?k=${k}`, {
      method: "POST",
      headers: { "content-type": "image/jpeg" },
      body: frame,
    });
    if (!r.ok) {
      let detail = `HTTP ${r.status}`;
      try {
        const doc = await r.json();
        if (doc.error) detail = `${doc.error}: ${doc.detail ?? ""}`;
      } catch {
        /* non-JSON error body; keep the status line */
      }
      throw new Error(`predict: ${detail}`);
    }
    return r.json();
  }
}
