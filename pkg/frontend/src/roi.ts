import type { Roi } from "./types.js";

/** Clamp a region-of-interest rectangle to the frame, keeping at least 1px. */
export function clampRoi(roi: Roi, frameWidth: number, frameHeight: number): Roi {
  const width = Math.max(1, Math.min(Math.round(roi.width), frameWidth));
  const height = Math.max(1, Math.min(Math.round(roi.height), frameHeight));
  const x = Math.max(0, Math.min(Math.round(roi.x), frameWidth - width));
  const y = Math.max(0, Math.min(Math.round(roi.y), frameHeight - height));
  return { x, y, width, height };
}
