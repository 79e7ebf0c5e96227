"""Training loop, early stopping, evaluation, and history export."""

from .loop import EpochRecord, History, TrainConfig, should_stop, train
from .evaluate import evaluate
from .history import CSV_HEADER, export_history, parse_history

__all__ = ["EpochRecord", "History", "TrainConfig", "should_stop", "train",
           "evaluate", "CSV_HEADER", "export_history", "parse_history"]
