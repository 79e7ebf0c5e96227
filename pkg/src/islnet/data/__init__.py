"""Dataset ingestion, stratified splitting, batching, synthetic glyph generation."""

from .dataset import DatasetIndex, SplitIndex, scan_dataset, stratified_split
from .batches import Batch, PreprocCache, batch_slices, make_batches
from .synth import CANONICAL_LABELS, glyph_geometry, render_glyph, synth_generate

__all__ = [
    "DatasetIndex", "SplitIndex", "scan_dataset", "stratified_split",
    "Batch", "PreprocCache", "batch_slices", "make_batches",
    "CANONICAL_LABELS", "glyph_geometry", "render_glyph", "synth_generate",
]
