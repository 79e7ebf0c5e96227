"""Batch streaming: seeded per-epoch shuffle, preprocessing, optional caching."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import IngestionError, ParameterError
from ..nn.tensor import make_rng
from ..preproc.pipeline import PipelineConfig, load_image, run_pipeline


@dataclass
class Batch:
    inputs: np.ndarray            # (B, h, w, 1) float64
    labels: list                  # B class indices


class PreprocCache:
    """Keeps pipeline outputs keyed by (path, config); stops adding when full.

    Purely an optimization: the pipeline is deterministic, so a hit returns
    exactly what a recompute would.
    """

    def __init__(self, max_entries: int = 4096):
        self.max_entries = max_entries
        self._store: dict = {}

    def get(self, path, cfg: PipelineConfig) -> np.ndarray:
        key = (str(path), cfg.cache_key())
        hit = self._store.get(key)
        if hit is not None:
            return hit
        out = _load_and_preprocess(path, cfg)
        if len(self._store) < self.max_entries:
            self._store[key] = out
        return out


def _load_and_preprocess(path, cfg: PipelineConfig) -> np.ndarray:
    try:
        img = load_image(path)
    except Exception as e:
        raise IngestionError(f"cannot read image {path}: {e}") from e
    return run_pipeline(img, cfg)


def batch_slices(n: int, batch_size: int) -> list:
    """(start, stop) pairs covering range(n); the final batch may be short."""
    if batch_size < 1:
        raise ParameterError(f"batch size must be >= 1, got {batch_size}")
    return [(s, min(s + batch_size, n)) for s in range(0, n, batch_size)]


def make_batches(samples: list, batch_size: int, shuffle_seed: int | None,
                 cfg: PipelineConfig, epoch: int = 0,
                 cache: PreprocCache | None = None):
    """Yield Batch objects covering `samples` exactly once.

    With a shuffle seed the order is a permutation drawn from
    rng(seed, epoch), identical across runs; with None the order is as given.
    """
    n = len(samples)
    if shuffle_seed is None:
        order = np.arange(n)
    else:
        order = make_rng([shuffle_seed, epoch]).permutation(n)
    fetch = cache.get if cache is not None else _load_and_preprocess
    for start, stop in batch_slices(n, batch_size):
        idx = order[start:stop]
        inputs = np.stack([fetch(samples[i][0], cfg) for i in idx])
        labels = [samples[i][1] for i in idx]
        yield Batch(inputs, labels)
