"""Canny edge detection: smoothing, gradients, thinning, hysteresis.

The stage sequence is: optional 5x5 Gaussian smoothing, Sobel gradients,
magnitude, orientation quantized to four directions, non-maximum
suppression, then double-threshold hysteresis. Exact decision rules
(documented here because the acceptance suite compares this implementation
bit-for-bit with an independent scalar reference):

* Orientation bins over theta in [0, 180): 0 (compare left/right),
  45 (up-left/down-right), 90 (up/down), 135 (up-right/down-left).
  Bins are chosen algebraically from |gy| vs tan(22.5)|gx| and
  tan(67.5)|gx| and the sign of gx*gy, never from an arctangent value.
* A pixel survives suppression iff its magnitude is >= the backward
  neighbor and strictly > the forward neighbor along the gradient
  direction, so exactly one pixel of an equal-magnitude plateau survives.
  The one-pixel outer border is always suppressed.
* Strong means magnitude >= high; weak means low <= magnitude < high.
  Weak pixels are kept iff 8-connected to a strong pixel, transitively.
"""
from __future__ import annotations

import math
from collections import deque

import numpy as np

from ..errors import ConfigError, DimensionError
from .ops import SOBEL_X, SOBEL_Y, _require_gray, correlate_replicated

TAN_22_5 = math.tan(math.radians(22.5))
TAN_67_5 = math.tan(math.radians(67.5))

# (backward dy, dx), (forward dy, dx) per orientation bin
_BIN_NEIGHBORS = {
    0: ((0, -1), (0, 1)),
    45: ((-1, -1), (1, 1)),
    90: ((-1, 0), (1, 0)),
    135: ((-1, 1), (1, -1)),
}


def gaussian_kernel(size: int = 5, sigma: float = 1.4) -> np.ndarray:
    """Normalized isotropic Gaussian, evaluated at integer offsets.

    The normalizer accumulates in row-major scalar order; bit-level
    reproducibility against a straightforward loop implementation depends
    on that order, so keep it.
    """
    half = size // 2
    k = np.empty((size, size))
    total = 0.0
    for i in range(size):
        for j in range(size):
            d2 = (i - half) ** 2 + (j - half) ** 2
            k[i, j] = math.exp(-d2 / (2.0 * sigma * sigma))
            total += k[i, j]
    return k / total


def quantize_direction(gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Orientation bin (0/45/90/135) per pixel from the raw gradient pair."""
    ax, ay = np.abs(gx), np.abs(gy)
    bins = np.full(gx.shape, 45, dtype=np.int16)
    bins[ay >= TAN_67_5 * ax] = 90
    np.copyto(bins, 135, where=(bins == 45) & (gx * gy < 0))
    bins[ay < TAN_22_5 * ax] = 0
    return bins


def non_maximum_suppression(mag: np.ndarray, bins: np.ndarray) -> np.ndarray:
    """Keep only directional local maxima; the outer border is dropped."""
    out = np.zeros_like(mag)
    h, w = mag.shape
    if h < 3 or w < 3:
        return out
    m = mag[1:-1, 1:-1]
    sub = out[1:-1, 1:-1]
    for b, ((bdy, bdx), (fdy, fdx)) in _BIN_NEIGHBORS.items():
        back = mag[1 + bdy:h - 1 + bdy, 1 + bdx:w - 1 + bdx]
        fwd = mag[1 + fdy:h - 1 + fdy, 1 + fdx:w - 1 + fdx]
        keep = (bins[1:-1, 1:-1] == b) & (m >= back) & (m > fwd)
        np.copyto(sub, m, where=keep)
    return out


def hysteresis(mag_nms: np.ndarray, low: float, high: float) -> np.ndarray:
    """Double threshold plus transitive 8-connected weak-to-strong linking."""
    strong = mag_nms >= high
    weak = (mag_nms >= low) & ~strong
    keep = strong.copy()
    todo = deque(zip(*np.nonzero(strong)))
    h, w = mag_nms.shape
    while todo:
        i, j = todo.popleft()
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                ni, nj = i + di, j + dj
                if 0 <= ni < h and 0 <= nj < w and weak[ni, nj] and not keep[ni, nj]:
                    keep[ni, nj] = True
                    todo.append((ni, nj))
    return keep.astype(np.uint8)


def canny(img: np.ndarray, low: float = 50.0, high: float = 150.0,
          gaussian_sigma: float | None = 1.4) -> np.ndarray:
    """Binary {0,1} edge map of a gray image."""
    img = _require_gray(img)
    if low >= high:
        raise ConfigError(f"hysteresis thresholds need low < high, got {low} >= {high}")
    smoothed = np.asarray(img, dtype=np.float64)
    if gaussian_sigma is not None:
        if img.shape[0] < 5 or img.shape[1] < 5:
            raise DimensionError(
                f"image {img.shape} smaller than the 5x5 Gaussian kernel")
        smoothed = correlate_replicated(smoothed, gaussian_kernel(5, gaussian_sigma))
    if smoothed.shape[0] < 3 or smoothed.shape[1] < 3:
        raise DimensionError(f"image {img.shape} smaller than the 3x3 Sobel kernel")
    gx = correlate_replicated(smoothed, SOBEL_X)
    gy = correlate_replicated(smoothed, SOBEL_Y)
    mag = np.sqrt(gx * gx + gy * gy)
    return hysteresis(non_maximum_suppression(mag, quantize_direction(gx, gy)), low, high)
