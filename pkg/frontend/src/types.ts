export interface Roi {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface CaptureSettings {
  /** Milliseconds between capture ticks; never below 100. */
  intervalMs: number;
  /** Crop rectangle within the video frame, clamped to frame bounds. */
  roi: Roi;
  /** Consecutive agreeing frames required before a character composes (1..10). */
  stabilityWindow: number;
  /** Minimum confidence for a prediction to count, in [0, 1]. */
  confidenceFloor: number;
  serviceUrl: string;
}

export interface Prediction {
  label: string;
  probability: number;
}

export interface PredictionResponse {
  model: string;
  predictions: Prediction[];
}

export interface RecentPrediction {
  label: string;
  confidence: number;
  timestampMs: number;
}

export type ConnectionStatus = "connecting" | "ok" | "unreachable" | "denied";

export const DEFAULT_SETTINGS: CaptureSettings = {
  intervalMs: 300,
  roi: { x: 0, y: 0, width: 480, height: 480 },
  stabilityWindow: 3,
  confidenceFloor: 0.6,
  serviceUrl: "http://127.0.0.1:8787",
};

export const MIN_INTERVAL_MS = 100;
export const MAX_STABILITY_WINDOW = 10;
export const RECENT_LIMIT = 50;
