"""SGD training loop with per-epoch validation, early stopping, checkpointing."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..data.batches import PreprocCache, make_batches
from ..data.dataset import SplitIndex
from ..errors import ParameterError, TrainingError
from ..model.network import Model
from ..nn import functional as F
from ..nn.layers import sgd_step
from ..nn.tensor import make_rng
from ..preproc.pipeline import PipelineConfig


@dataclass
class TrainConfig:
    epochs: int = 25
    batch_size: int = 32
    learning_rate: float = 0.01
    patience: int = 5
    min_delta: float = 1e-4
    seed_init: int = 1
    seed_shuffle: int = 2
    profile: str = "desk"

    def __post_init__(self):
        if self.epochs < 1:
            raise ParameterError(f"epochs must be >= 1, got {self.epochs}")
        if self.patience < 0:
            raise ParameterError(f"patience must be >= 0, got {self.patience}")
        if self.learning_rate <= 0:
            raise ParameterError(f"learning rate must be > 0, got {self.learning_rate}")


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    train_accuracy: float
    val_loss: float
    val_accuracy: float
    seconds: float


@dataclass
class History:
    records: list = field(default_factory=list)
    stopped_early: bool = False
    best_epoch: int = 0               # 1-based index of the minimal val-loss epoch


def should_stop(records: list, patience: int, min_delta: float) -> bool:
    """True iff val loss has gone `patience` consecutive epochs without
    improving on the best seen value by more than `min_delta`.

    An improving epoch never triggers a stop, so patience 0 fires at the
    first non-improving epoch.
    """
    if not records:
        raise ParameterError("early stopping needs at least one epoch record")
    best = float("inf")
    wait = 0
    for rec in records:
        if rec.val_loss < best - min_delta:
            best = rec.val_loss
            wait = 0
        else:
            wait += 1
    return wait > 0 and wait >= patience


def _forward_batch(model: Model, batch, rng) -> tuple[float, int, np.ndarray]:
    """Loss and correct count for one batch in the model's current mode."""
    logits = model.forward_logits(batch.inputs, rng)
    loss, probs, dlogits = F.softmax_cross_entropy(logits, batch.labels)
    correct = int((np.argmax(probs, axis=1) == np.asarray(batch.labels)).sum())
    return loss, correct, dlogits


def _validation_pass(model: Model, samples, cfg: TrainConfig,
                     pipeline: PipelineConfig, cache) -> tuple[float, float]:
    model.set_mode("infer")
    total_loss = 0.0
    correct = 0
    n = 0
    for batch in make_batches(samples, cfg.batch_size, None, pipeline, cache=cache):
        loss, c, _ = _forward_batch(model, batch, None)
        b = len(batch.labels)
        total_loss += loss * b
        correct += c
        n += b
    return total_loss / n, correct / n


def train(model: Model, split: SplitIndex, cfg: TrainConfig,
          pipeline: PipelineConfig, checkpoint_dir=None,
          cache: PreprocCache | None = None, log=None) -> tuple[Model, History]:
    """Train in place; returns the model restored to its best-val-loss weights.

    Each epoch runs a seeded shuffle of the train part, one SGD step per
    batch, then a full infer-mode pass over the test part. The epoch with
    the lowest validation loss is snapshotted and restored at the end.
    """
    if not split.train or not split.test:
        raise ParameterError("both split parts must be non-empty")
    if cache is None:
        cache = PreprocCache()
    dropout_rng = make_rng([cfg.seed_init, 0xD0])
    history = History()
    best_loss = float("inf")
    best_state = None

    for epoch in range(1, cfg.epochs + 1):
        t0 = time.monotonic()
        model.set_mode("train")
        total_loss = 0.0
        correct = 0
        seen = 0
        batches = make_batches(split.train, cfg.batch_size, cfg.seed_shuffle,
                               pipeline, epoch=epoch, cache=cache)
        for bi, batch in enumerate(batches):
            loss, c, dlogits = _forward_batch(model, batch, dropout_rng)
            if not np.isfinite(loss):
                raise TrainingError(
                    f"non-finite loss at epoch {epoch}, batch {bi} "
                    f"(layer {model.layers[-2].id})")
            try:
                model.backward_from_logits(dlogits)
                sgd_step(model.params(), cfg.learning_rate)
            except TrainingError as e:
                raise TrainingError(f"epoch {epoch}, batch {bi}: {e}") from None
            b = len(batch.labels)
            total_loss += loss * b
            correct += c
            seen += b

        val_loss, val_acc = _validation_pass(model, split.test, cfg, pipeline, cache)
        rec = EpochRecord(epoch, total_loss / seen, correct / seen,
                          val_loss, val_acc, time.monotonic() - t0)
        history.records.append(rec)
        if log:
            log(f"epoch {epoch:3d}  loss {rec.train_loss:.4f}  acc {rec.train_accuracy:.4f}  "
                f"val_loss {val_loss:.4f}  val_acc {val_acc:.4f}")

        if val_loss < best_loss:
            best_loss = val_loss
            best_state = model.copy_state()
            history.best_epoch = epoch
            if checkpoint_dir is not None:
                from ..model.serialize import save_model
                path = Path(checkpoint_dir) / f"checkpoint-epoch{epoch:03d}.islm"
                save_model(model, path)

        if should_stop(history.records, cfg.patience, cfg.min_delta):
            history.stopped_early = True
            break

    if best_state is not None:
        model.load_state(best_state)
    model.set_mode("infer")
    return model, history
