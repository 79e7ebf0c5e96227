"""The staged preprocessing workflow that turns a photo into network input.

Default order: grayscale -> threshold(90) -> canny -> resize. The stage
list is configurable so the thresholded or plain grayscale variants can
feed the network instead of the edge map.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from ..errors import ConfigError
from . import ops
from .canny import canny

DEFAULT_STAGES = ("grayscale", "threshold", "canny", "resize")
STAGE_NAMES = frozenset(DEFAULT_STAGES)

# stages whose output is two-valued; their presence makes the final tensor binary
_BINARIZING = ("threshold", "canny")


@dataclass(frozen=True)
class PipelineConfig:
    threshold: int = 90
    canny_low: float = 50.0
    canny_high: float = 150.0
    gaussian_sigma: float | None = 1.4       # None disables smoothing
    target_size: tuple = (256, 256)          # (width, height)
    stages: tuple = DEFAULT_STAGES
    debug_dir: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(self, "target_size", tuple(self.target_size))
        if not 0 <= self.threshold <= 255:
            raise ConfigError(f"threshold must be in [0, 255], got {self.threshold}")
        if self.canny_low >= self.canny_high:
            raise ConfigError(
                f"hysteresis thresholds need low < high, got "
                f"{self.canny_low} >= {self.canny_high}")
        unknown = [s for s in self.stages if s not in STAGE_NAMES]
        if unknown:
            raise ConfigError(f"unknown pipeline stage {unknown[0]!r}")

    def cache_key(self) -> tuple:
        return (self.threshold, self.canny_low, self.canny_high,
                self.gaussian_sigma, self.target_size, self.stages)


def load_image(path) -> np.ndarray:
    """Decode a PNG/JPEG file to an (H, W, 3) uint8 RGB array."""
    from PIL import Image
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def save_gray_png(path, img: np.ndarray) -> None:
    from PIL import Image
    Image.fromarray(np.asarray(img, dtype=np.uint8), mode="L").save(path, format="PNG")


def run_pipeline(img: np.ndarray, cfg: PipelineConfig,
                 timings: dict | None = None) -> np.ndarray:
    """Apply the configured stages and emit an (h, w, 1) float64 tensor.

    When the stage list contains a binarizing stage the output values are
    exactly {0.0, 1.0} (interpolated pixels from a later resize snap back
    at 128); otherwise they are gray levels scaled to [0, 1]. Passing a
    dict as `timings` records per-stage wall time in milliseconds.
    """
    import time

    img = np.asarray(img)
    current = img
    debug = Path(cfg.debug_dir) if cfg.debug_dir else None
    if debug:
        debug.mkdir(parents=True, exist_ok=True)

    for i, stage in enumerate(cfg.stages):
        t0 = time.monotonic()
        if stage == "grayscale":
            current = ops.to_grayscale(current)
        elif stage == "threshold":
            current = ops.binary_threshold(_as_gray(current, stage), cfg.threshold)
        elif stage == "canny":
            edges = canny(_as_gray(current, stage), cfg.canny_low, cfg.canny_high,
                          cfg.gaussian_sigma)
            current = (edges * 255).astype(np.uint8)
        elif stage == "resize":
            current = ops.resize(_as_gray(current, stage), cfg.target_size)
        if timings is not None:
            timings[stage] = (time.monotonic() - t0) * 1000.0
        if debug:
            dump = current if current.ndim == 2 else ops.to_grayscale(current)
            ops_path = debug / f"{i:02d}_{stage}.png"
            save_gray_png(ops_path, dump)

    gray = _as_gray(current, "output")
    if any(s in cfg.stages for s in _BINARIZING):
        out = (gray >= 128).astype(np.float64)
    else:
        out = gray.astype(np.float64) / 255.0
    return out[:, :, np.newaxis]


def _as_gray(img: np.ndarray, stage: str) -> np.ndarray:
    if img.ndim != 2:
        raise ConfigError(
            f"stage {stage!r} needs a gray image; put 'grayscale' before it")
    return img


def paper_literal_config() -> PipelineConfig:
    """The pipeline without smoothing, as the workflow figure lists it."""
    return replace(PipelineConfig(), gaussian_sigma=None)
