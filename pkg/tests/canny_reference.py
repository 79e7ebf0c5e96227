"""Straightforward scalar reference for the Canny edge detector.

Deliberately written with plain nested loops and scalar math so it shares
no code with the production implementation. It follows the same documented
decision rules (row-major kernel accumulation from 0.0, replicated border,
algebraic orientation bins, >=/> suppression rule with the border dropped,
strong >= high, weak >= low, transitive 8-connected linking), so outputs
must agree bit for bit.
"""
import math

import numpy as np


def _clamp(v, lo, hi):
    return lo if v < lo else (hi if v > hi else v)


def _correlate(img, kernel):
    h = len(img)
    w = len(img[0])
    kh = len(kernel)
    kw = len(kernel[0])
    ch, cw = kh // 2, kw // 2
    out = [[0.0] * w for _ in range(h)]
    for i in range(h):
        for j in range(w):
            s = 0.0
            for u in range(kh):
                for v in range(kw):
                    pi = _clamp(i + u - ch, 0, h - 1)
                    pj = _clamp(j + v - cw, 0, w - 1)
                    s += kernel[u][v] * img[pi][pj]
            out[i][j] = s
    return out


def _gaussian5(sigma):
    k = [[0.0] * 5 for _ in range(5)]
    total = 0.0
    for i in range(5):
        for j in range(5):
            d2 = (i - 2) ** 2 + (j - 2) ** 2
            k[i][j] = math.exp(-d2 / (2.0 * sigma * sigma))
            total += k[i][j]
    for i in range(5):
        for j in range(5):
            k[i][j] = k[i][j] / total
    return k


_GX = [[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]]
_GY = [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]]

_T22 = math.tan(math.radians(22.5))
_T67 = math.tan(math.radians(67.5))

_NEIGHBORS = {
    0: ((0, -1), (0, 1)),
    45: ((-1, -1), (1, 1)),
    90: ((-1, 0), (1, 0)),
    135: ((-1, 1), (1, -1)),
}


def _direction(gx, gy):
    ax = abs(gx)
    ay = abs(gy)
    if ay >= _T67 * ax:
        return 90
    if ay < _T22 * ax:
        return 0
    if gx * gy < 0:
        return 135
    return 45


def reference_canny(img, low=50.0, high=150.0, sigma=1.4):
    """Binary {0,1} uint8 edge map; mirror of the production contract."""
    img = np.asarray(img)
    h, w = img.shape
    pixels = [[float(img[i, j]) for j in range(w)] for i in range(h)]
    if sigma is not None:
        pixels = _correlate(pixels, _gaussian5(sigma))
    gx = _correlate(pixels, _GX)
    gy = _correlate(pixels, _GY)

    mag = [[math.sqrt(gx[i][j] * gx[i][j] + gy[i][j] * gy[i][j])
            for j in range(w)] for i in range(h)]

    nms = [[0.0] * w for _ in range(h)]
    for i in range(1, h - 1):
        for j in range(1, w - 1):
            (bdy, bdx), (fdy, fdx) = _NEIGHBORS[_direction(gx[i][j], gy[i][j])]
            m = mag[i][j]
            if m >= mag[i + bdy][j + bdx] and m > mag[i + fdy][j + fdx]:
                nms[i][j] = m

    strong = [[nms[i][j] >= high for j in range(w)] for i in range(h)]
    weak = [[low <= nms[i][j] < high for j in range(w)] for i in range(h)]
    keep = [[strong[i][j] for j in range(w)] for i in range(h)]
    stack = [(i, j) for i in range(h) for j in range(w) if strong[i][j]]
    while stack:
        i, j = stack.pop()
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                ni, nj = i + di, j + dj
                if 0 <= ni < h and 0 <= nj < w and weak[ni][nj] and not keep[ni][nj]:
                    keep[ni][nj] = True
                    stack.append((ni, nj))
    return np.array(keep, dtype=np.uint8)
