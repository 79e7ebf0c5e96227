import type { Prediction } from "./types.js";

/** True when the top label deserves the highlight treatment. */
export function shouldHighlight(confidence: number, floor: number): boolean {
  return confidence >= floor;
}

export function barWidthPercent(probability: number): number {
  return Math.max(0, Math.min(100, Math.round(probability * 100)));
}

/** The top-3 rows of the prediction panel, as data for the DOM layer. */
export interface OverlayRow {
  label: string;
  probability: number;
  widthPercent: number;
  highlighted: boolean;
  dimmed: boolean;
}

export function overlayRows(predictions: Prediction[], floor: number): OverlayRow[] {
  return predictions.slice(0, 3).map((p, i) => ({
    label: p.label,
    probability: p.probability,
    widthPercent: barWidthPercent(p.probability),
    highlighted: i === 0 && shouldHighlight(p.probability, floor),
    dimmed: i === 0 && !shouldHighlight(p.probability, floor),
  }));
}

/** Every predicted label must exist in the service's label list. */
export function labelsConsistent(predictions: Prediction[], known: string[]): boolean {
  const set = new Set(known);
  return predictions.every((p) => set.has(p.label));
}

export function renderOverlay(
  container: HTMLElement,
  predictions: Prediction[],
  latencyMs: number,
  floor: number,
): void {
  const rows = overlayRows(predictions, floor);
  container.replaceChildren();
  for (const row of rows) {
    const div = document.createElement("div");
    div.className = "prediction-row"
      + (row.highlighted ? " highlighted" : "")
      + (row.dimmed ? " dimmed" : "");
    const name = document.createElement("span");
    name.className = "label";
    name.textContent = row.label;
    const bar = document.createElement("div");
    bar.className = "bar";
    bar.style.width = `${row.widthPercent}%`;
    const pct = document.createElement("span");
    pct.className = "pct";
    pct.textContent = `${(row.probability * 100).toFixed(1)}%`;
    div.append(name, bar, pct);
    container.append(div);
  }
  const lat = document.createElement("div");
  lat.className = "latency";
  lat.textContent = `round trip ${Math.round(latencyMs)} ms`;
  container.append(lat);
}
