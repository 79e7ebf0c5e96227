import { RECENT_LIMIT } from "./types.js";
import type { RecentPrediction } from "./types.js";

const REPEAT_GAP_MS = 1000;

/**
 * Turns a stream of per-frame predictions into composed text.
 *
 * A character is appended when the same label arrives with confidence at or
 * above the floor for `stabilityWindow` consecutive frames. After an append,
 * that label is suppressed until a different label arrives or one second
 * passes, so holding a sign steady types it once. The buffer itself changes
 * only through this rule or the explicit edit methods.
 */
export class Composer {
  buffer = "";
  recent: RecentPrediction[] = [];

  private streakLabel: string | null = null;
  private streakCount = 0;
  private suppressedLabel: string | null = null;
  private lastAppendMs = -Infinity;

  constructor(
    private stabilityWindow: number,
    private confidenceFloor: number,
  ) {}

  configure(stabilityWindow: number, confidenceFloor: number): void {
    this.stabilityWindow = stabilityWindow;
    this.confidenceFloor = confidenceFloor;
  }

  /** Feed one prediction; returns the appended character or null. */
  push(label: string, confidence: number, timestampMs: number): string | null {
    this.recent.push({ label, confidence, timestampMs });
    if (this.recent.length > RECENT_LIMIT) {
      this.recent.splice(0, this.recent.length - RECENT_LIMIT);
    }

    if (this.suppressedLabel !== null && label !== this.suppressedLabel) {
      this.suppressedLabel = null;
    }

    if (confidence < this.confidenceFloor) {
      this.streakLabel = null;
      this.streakCount = 0;
      return null;
    }

    if (label === this.streakLabel) {
      this.streakCount += 1;
    } else {
      this.streakLabel = label;
      this.streakCount = 1;
    }

    if (this.streakCount < this.stabilityWindow) return null;
    const gapOk = timestampMs - this.lastAppendMs >= REPEAT_GAP_MS;
    if (label === this.suppressedLabel && !gapOk) return null;

    this.buffer += label;
    this.suppressedLabel = label;
    this.lastAppendMs = timestampMs;
    this.streakCount = 0;
    this.streakLabel = null;
    return label;
  }

  appendSpace(): void {
    this.buffer += " ";
  }

  backspace(): void {
    this.buffer = this.buffer.slice(0, -1);
  }

  clear(): void {
    this.buffer = "";
  }
}
