import type { ServiceClient } from "./api.js";
import type { PredictionResponse } from "./types.js";

export interface FrameSource {
  /** One encoded frame, or null when no frame is available yet. */
  grab(): Blob | null;
}

export interface LoopHandlers {
  onResult(response: PredictionResponse, latencyMs: number): void;
  onError(error: unknown): void;
}

export interface LoopStats {
  ticks: number;
  requestsStarted: number;
  requestsFinished: number;
  skippedWhileInFlight: number;
  maxConcurrentRequests: number;
}

/**
 * Polls the frame source on a timer and posts one frame per tick.
 *
 * Backpressure rule: at most one request is ever in flight; a tick that
 * fires while the previous request is pending is skipped outright, so a
 * slow service never builds a queue. Errors surface through the handler
 * and the loop keeps running.
 */
export class CaptureLoop {
  readonly stats: LoopStats = {
    ticks: 0,
    requestsStarted: 0,
    requestsFinished: 0,
    skippedWhileInFlight: 0,
    maxConcurrentRequests: 0,
  };

  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = 0;
  private intervalMs: number;

  constructor(
    intervalMs: number,
    private source: FrameSource,
    private client: ServiceClient,
    private handlers: LoopHandlers,
    private now: () => number = () => Date.now(),
  ) {
    this.intervalMs = intervalMs;
  }

  start(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => void this.tick(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  get running(): boolean {
    return this.timer !== null;
  }

  /** Applies on the next tick: re-arms the timer with the new interval. */
  setInterval(intervalMs: number): void {
    if (intervalMs === this.intervalMs) return;
    this.intervalMs = intervalMs;
    if (this.timer !== null) {
      this.stop();
      this.start();
    }
  }

  private async tick(): Promise<void> {
    this.stats.ticks += 1;
    if (this.inFlight > 0) {
      this.stats.skippedWhileInFlight += 1;
      return;
    }
    const frame = this.source.grab();
    if (frame === null) return;
    this.inFlight += 1;
    this.stats.requestsStarted += 1;
    this.stats.maxConcurrentRequests = Math.max(
      this.stats.maxConcurrentRequests, this.inFlight);
    const t0 = this.now();
    try {
      const response = await this.client.predict(frame);
      this.handlers.onResult(response, this.now() - t0);
    } catch (err) {
      this.handlers.onError(err);
    } finally {
      this.inFlight -= 1;
      this.stats.requestsFinished += 1;
    }
  }
}
