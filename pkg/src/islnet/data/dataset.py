"""Dataset ingestion and the seeded stratified train/test split.

Directory layout: one subdirectory per class, class label = directory name,
images directly inside. Labels are ordered by plain lexicographic byte
order, which puts digits before uppercase letters, so the canonical
35-class layout (0-9 then A-Z) comes out in its natural order.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..errors import IngestionError, SplitError
from ..nn.tensor import make_rng

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}


@dataclass
class DatasetIndex:
    classes: list                 # ordered label names
    samples: list                 # (path, class_index) pairs, class-major
    counts: list                  # per-class sample counts
    skipped: int = 0              # non-image files ignored during the scan

    @property
    def class_count(self) -> int:
        return len(self.classes)


@dataclass
class SplitIndex:
    train: list                   # (path, class_index)
    test: list
    seed: int
    ratio: float
    classes: list


def scan_dataset(root) -> DatasetIndex:
    """Index a class-per-directory tree; unreadable entries are counted, not fatal."""
    root = Path(root)
    if not root.is_dir():
        raise IngestionError(f"dataset root {root} does not exist")
    class_dirs = sorted((d for d in root.iterdir() if d.is_dir()),
                        key=lambda d: d.name)
    if not class_dirs:
        raise IngestionError(f"dataset root {root} contains no class directories")
    classes = [d.name for d in class_dirs]
    samples = []
    counts = []
    skipped = 0
    for idx, d in enumerate(class_dirs):
        n = 0
        for f in sorted(d.iterdir(), key=lambda p: p.name):
            if not f.is_file() or f.suffix.lower() not in IMAGE_SUFFIXES:
                skipped += 1
                continue
            samples.append((f, idx))
            n += 1
        counts.append(n)
    return DatasetIndex(classes, samples, counts, skipped)


def _round_half_up(x: float) -> int:
    import math
    return int(math.floor(x + 0.5))


def stratified_split(index: DatasetIndex, ratio: float = 0.8, seed: int = 0) -> SplitIndex:
    """Per-class seeded shuffle, then a cut at round(ratio * class size)."""
    if not 0.0 < ratio < 1.0:
        raise SplitError(f"split ratio must be in (0, 1), got {ratio}")
    rng = make_rng(seed)
    by_class = [[] for _ in index.classes]
    for path, idx in index.samples:
        by_class[idx].append((path, idx))
    train, test = [], []
    for idx, items in enumerate(by_class):
        if len(items) < 2:
            raise SplitError(
                f"class {index.classes[idx]!r} has {len(items)} samples, need at least 2")
        order = rng.permutation(len(items))
        cut = _round_half_up(ratio * len(items))
        train.extend(items[i] for i in order[:cut])
        test.extend(items[i] for i in order[cut:])
    return SplitIndex(train, test, seed, ratio, list(index.classes))
