"""Training history CSV export/import (the accuracy/loss curve data)."""
from __future__ import annotations

from pathlib import Path

from .loop import EpochRecord, History

CSV_HEADER = "epoch,loss,accuracy,val_loss,val_accuracy,seconds"


def export_history(history: History, path, include_timing: bool = True) -> None:
    """One row per epoch; floats use repr so a parse round-trips exactly.

    With include_timing False the seconds column is written as 0.0, which
    makes the file a pure function of the training math (used to compare
    reruns byte for byte).
    """
    lines = [CSV_HEADER]
    for rec in history.records:
        seconds = rec.seconds if include_timing else 0.0
        lines.append(f"{rec.epoch},{rec.train_loss!r},{rec.train_accuracy!r},"
                     f"{rec.val_loss!r},{rec.val_accuracy!r},{seconds!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def parse_history(path) -> list:
    """Read back EpochRecords written by export_history."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: not a history CSV")
    out = []
    for ln in lines[1:]:
        e, loss, acc, vl, va, sec = ln.split(",")
        out.append(EpochRecord(int(e), float(loss), float(acc),
                               float(vl), float(va), float(sec)))
    return out
