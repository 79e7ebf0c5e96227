import { ServiceClient } from "./api.js";
import { CaptureLoop, FrameSource } from "./captureLoop.js";
import { Composer } from "./compose.js";
import { labelsConsistent, renderOverlay } from "./overlay.js";
import { clampRoi } from "./roi.js";
import { applySettingsEdit } from "./settings.js";
import { DEFAULT_SETTINGS } from "./types.js";
import type { CaptureSettings, ConnectionStatus } from "./types.js";

const FRAME_SIZE = 256;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

class VideoFrameSource implements FrameSource {
  private canvas = document.createElement("canvas");
  private latest: Blob | null = null;
  private encoding = false;

  constructor(private video: HTMLVideoElement, private settings: () => CaptureSettings) {
    this.canvas.width = FRAME_SIZE;
    this.canvas.height = FRAME_SIZE;
  }

  /** Synchronous grab of the most recent encoded frame; re-encodes in the background. */
  grab(): Blob | null {
    this.encode();
    return this.latest;
  }

  private encode(): void {
    if (this.encoding || this.video.videoWidth === 0) return;
    const roi = clampRoi(this.settings().roi, this.video.videoWidth, this.video.videoHeight);
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.drawImage(this.video, roi.x, roi.y, roi.width, roi.height,
      0, 0, FRAME_SIZE, FRAME_SIZE);
    this.encoding = true;
    this.canvas.toBlob((blob) => {
      if (blob) this.latest = blob;
      this.encoding = false;
    }, "image/jpeg", 0.85);
  }
}

async function start(): Promise<void> {
  let settings: CaptureSettings = { ...DEFAULT_SETTINGS, roi: { ...DEFAULT_SETTINGS.roi } };
  const video = el<HTMLVideoElement>("camera");
  const overlay = el<HTMLDivElement>("overlay");
  const banner = el<HTMLDivElement>("banner");
  const bufferBox = el<HTMLDivElement>("buffer");
  const composer = new Composer(settings.stabilityWindow, settings.confidenceFloor);
  const client = new ServiceClient(settings.serviceUrl);
  let knownLabels: string[] = [];

  const setStatus = (status: ConnectionStatus, detail = "") => {
    banner.dataset.status = status;
    banner.textContent = {
      connecting: "connecting to service...",
      ok: `service ok ${detail}`,
      unreachable: `service unreachable ${detail}`,
      denied: "camera permission denied - allow access and reload",
    }[status];
  };

  const renderBuffer = () => {
    bufferBox.textContent = composer.buffer || " ";
  };

  setStatus("connecting");
  try {
    const stream = await navigator.mediaDevices.getUserMedia({ video: true });
    video.srcObject = stream;
    await video.play();
  } catch {
    setStatus("denied");
    return;
  }

  try {
    const health = await client.health();
    knownLabels = await client.labels();
    setStatus("ok", `(model ${health.model}, ${knownLabels.length} labels)`);
  } catch (e) {
    setStatus("unreachable", String(e));
  }

  const source = new VideoFrameSource(video, () => settings);
  const loop = new CaptureLoop(settings.intervalMs, source, client, {
    onResult: (response, latencyMs) => {
      setStatus("ok", `(model ${response.model})`);
      if (knownLabels.length && !labelsConsistent(response.predictions, knownLabels)) {
        setStatus("unreachable", "label mismatch between /labels and /predict");
        return;
      }
      renderOverlay(overlay, response.predictions, latencyMs, settings.confidenceFloor);
      const top = response.predictions[0];
      if (top && composer.push(top.label, top.probability, Date.now()) !== null) {
        renderBuffer();
      }
    },
    onError: (err) => setStatus("unreachable", String(err)),
  });
  loop.start();

  // composed-text edit buttons
  el<HTMLButtonElement>("space").onclick = () => { composer.appendSpace(); renderBuffer(); };
  el<HTMLButtonElement>("backspace").onclick = () => { composer.backspace(); renderBuffer(); };
  el<HTMLButtonElement>("clear").onclick = () => { composer.clear(); renderBuffer(); };
  renderBuffer();

  // settings panel; changes land on the next tick
  const errorsBox = el<HTMLDivElement>("settings-errors");
  el<HTMLButtonElement>("apply-settings").onclick = () => {
    const edit = {
      intervalMs: Number(el<HTMLInputElement>("interval").value),
      stabilityWindow: Number(el<HTMLInputElement>("window").value),
      confidenceFloor: Number(el<HTMLInputElement>("floor").value),
      serviceUrl: el<HTMLInputElement>("url").value,
      roi: {
        x: Number(el<HTMLInputElement>("roi-x").value),
        y: Number(el<HTMLInputElement>("roi-y").value),
        width: Number(el<HTMLInputElement>("roi-w").value),
        height: Number(el<HTMLInputElement>("roi-h").value),
      },
    };
    const result = applySettingsEdit(settings, edit);
    settings = result.value;
    errorsBox.textContent = result.errors.join("; ");
    composer.configure(settings.stabilityWindow, settings.confidenceFloor);
    client.setBaseUrl(settings.serviceUrl);
    loop.setInterval(settings.intervalMs);
  };

  const fill = () => {
    el<HTMLInputElement>("interval").value = String(settings.intervalMs);
    el<HTMLInputElement>("window").value = String(settings.stabilityWindow);
    el<HTMLInputElement>("floor").value = String(settings.confidenceFloor);
    el<HTMLInputElement>("url").value = settings.serviceUrl;
    el<HTMLInputElement>("roi-x").value = String(settings.roi.x);
    el<HTMLInputElement>("roi-y").value = String(settings.roi.y);
    el<HTMLInputElement>("roi-w").value = String(settings.roi.width);
    el<HTMLInputElement>("roi-h").value = String(settings.roi.height);
  };
  fill();
}

void start();
