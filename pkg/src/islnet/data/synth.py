"""Synthetic glyph dataset: a desk-scale stand-in for the real gesture photos.

Each class renders a distinct figure (a regular polygon with a fixed vertex
count, repeated as concentric rings) in white strokes on black, with seeded
jitter in position, rotation (plus/minus 15 degrees), scale, and stroke
thickness. The output tree is directly ingestible by scan_dataset.
"""
from __future__ import annotations

import math
from pathlib import Path

from ..errors import IngestionError, ParameterError
from ..labels import CANONICAL_LABELS
from ..nn.tensor import make_rng

IMAGE_SIZE = 256
_SIDES = (3, 4, 5, 6, 8)
_RING_SCALES = (1.0, 0.78, 0.61, 0.47, 0.37, 0.29, 0.22)


def glyph_geometry(class_index: int) -> tuple[int, int]:
    """(polygon sides, ring count) for a class; distinct per class index < 35.

    Side counts stay coarse (3/4/5/6/8) so classes differ by silhouette,
    not by a one-vertex subtlety that resampling would blur away.
    """
    return _SIDES[class_index % 5], 1 + class_index // 5


def _polygon(cx: float, cy: float, radius: float, sides: int, rotation: float) -> list:
    pts = []
    for k in range(sides):
        a = rotation + 2.0 * math.pi * k / sides
        pts.append((cx + radius * math.cos(a), cy + radius * math.sin(a)))
    pts.append(pts[0])
    return pts


def render_glyph(class_index: int, rng):
    """One 256x256 grayscale PIL image with seeded jitter."""
    from PIL import Image, ImageDraw
    sides, rings = glyph_geometry(class_index)
    img = Image.new("L", (IMAGE_SIZE, IMAGE_SIZE), 0)
    draw = ImageDraw.Draw(img)
    cx = IMAGE_SIZE / 2 + rng.uniform(-12.0, 12.0)
    cy = IMAGE_SIZE / 2 + rng.uniform(-12.0, 12.0)
    rotation = math.radians(rng.uniform(-15.0, 15.0))
    base = 96.0 * rng.uniform(0.85, 1.0)
    thickness = int(rng.integers(6, 13))
    for r in range(rings):
        pts = _polygon(cx, cy, base * _RING_SCALES[r], sides, rotation)
        draw.line(pts, fill=255, width=thickness, joint="curve")
    return img


def synth_generate(out_dir, classes: int, per_class: int, seed: int = 0) -> Path:
    """Write classes x per_class glyph PNGs under out_dir, one subdir per label."""
    if not 2 <= classes <= 35:
        raise ParameterError(f"classes must be in [2, 35], got {classes}")
    if per_class < 1:
        raise ParameterError(f"per-class count must be >= 1, got {per_class}")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IngestionError(f"cannot create output directory {out}: {e}") from e
    for idx in range(classes):
        label = CANONICAL_LABELS[idx]
        class_dir = out / label
        class_dir.mkdir(exist_ok=True)
        for i in range(per_class):
            rng = make_rng([seed, idx, i])
            img = render_glyph(idx, rng)
            img.save(class_dir / f"{label}_{i:04d}.png", format="PNG")
    return out
