import { MAX_STABILITY_WINDOW, MIN_INTERVAL_MS } from "./types.js";
import type { CaptureSettings } from "./types.js";

export interface ValidationResult {
  ok: boolean;
  errors: string[];
  value: CaptureSettings;
}

/** Validate edits; invalid fields keep their previous values. */
export function applySettingsEdit(
  current: CaptureSettings,
  edit: Partial<CaptureSettings>,
): ValidationResult {
  const errors: string[] = [];
  const value: CaptureSettings = { ...current, roi: { ...current.roi } };

  if (edit.intervalMs !== undefined) {
    if (Number.isFinite(edit.intervalMs) && edit.intervalMs >= MIN_INTERVAL_MS) {
      value.intervalMs = edit.intervalMs;
    } else {
      errors.push(`interval must be at least ${MIN_INTERVAL_MS} ms`);
    }
  }
  if (edit.stabilityWindow !== undefined) {
    const k = edit.stabilityWindow;
    if (Number.isInteger(k) && k >= 1 && k <= MAX_STABILITY_WINDOW) {
      value.stabilityWindow = k;
    } else {
      errors.push(`stability window must be 1..${MAX_STABILITY_WINDOW}`);
    }
  }
  if (edit.confidenceFloor !== undefined) {
    const f = edit.confidenceFloor;
    if (Number.isFinite(f) && f >= 0 && f <= 1) {
      value.confidenceFloor = f;
    } else {
      errors.push("confidence floor must be in [0, 1]");
    }
  }
  if (edit.serviceUrl !== undefined) {
    try {
      const u = new URL(edit.serviceUrl);
      if (u.protocol !== "http:" && u.protocol !== "https:") throw new Error();
      value.serviceUrl = edit.serviceUrl.replace(/\/$/, "");
    } catch {
      errors.push("service URL must be a valid http(s) URL");
    }
  }
  if (edit.roi !== undefined) {
    const r = edit.roi;
    if (r.width >= 1 && r.height >= 1) {
      value.roi = { ...r };
    } else {
      errors.push("region of interest needs positive width and height");
    }
  }
  return { ok: errors.length === 0, errors, value };
}
