"""Metric evaluation of a model over one split part."""
from __future__ import annotations

import numpy as np

from ..data.batches import PreprocCache, make_batches
from ..errors import ParameterError, StateError
from ..metrics import MetricsReport, confusion, macro_report
from ..model.network import Model
from ..preproc.pipeline import PipelineConfig


def evaluate(model: Model, samples: list, pipeline: PipelineConfig,
             class_labels: list | None = None, batch_size: int = 32,
             cache: PreprocCache | None = None) -> MetricsReport:
    """Full infer-mode pass; confusion matrix and all derived metrics."""
    if not samples:
        raise ParameterError("cannot evaluate an empty split part")
    if model.mode != "infer":
        raise StateError("evaluate requires the model to be in infer mode")
    k = model.manifest.class_count
    trues, preds = [], []
    for batch in make_batches(samples, batch_size, None, pipeline, cache=cache):
        probs = model.forward(batch.inputs)
        preds.extend(int(i) for i in np.argmax(probs, axis=1))
        trues.extend(batch.labels)
    return macro_report(confusion(trues, preds, k), class_labels)
