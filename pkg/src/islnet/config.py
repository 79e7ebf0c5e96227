"""One YAML config file drives the CLI and the service.

The format is versioned and every key has a default, so an empty file is a
valid config. CLI flags override file values. See README for the full
schema and a commented example.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError
from .nn.tensor import RNG_ALGORITHM
from .preproc.pipeline import DEFAULT_STAGES, PipelineConfig
from .train.loop import TrainConfig

CONFIG_VERSION = 1

PROFILE_INPUT_SIZE = {"table1": 256, "desk": 64}


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8787
    max_body_mb: int = 5

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ConfigError(f"port must be in [1, 65535], got {self.port}")
        if self.max_body_mb < 1:
            raise ConfigError(f"max_body_mb must be >= 1, got {self.max_body_mb}")


LOG_LEVELS = ("critical", "error", "warning", "info", "debug")


@dataclass
class AppConfig:
    dataset_root: str = "data"
    model_path: str = "model.islm"
    profile: str = "desk"
    split_ratio: float = 0.8
    split_seed: int = 3
    history_path: str = "history.csv"
    timing_in_csv: bool = True
    checkpoint_dir: str | None = None
    log_level: str = "info"
    train: TrainConfig = field(default_factory=TrainConfig)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    service: ServiceConfig = field(default_factory=ServiceConfig)


def _section(data: dict, name: str) -> dict:
    sec = data.get(name) or {}
    if not isinstance(sec, dict):
        raise ConfigError(f"config section {name!r} must be a mapping")
    return sec


def load_config(path=None) -> AppConfig:
    """Parse a YAML config file; None means all defaults."""
    data = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"config {path} is not valid YAML: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must be a YAML mapping")

    version = data.get("config_version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise ConfigError(f"unsupported config_version {version}")
    algo = data.get("rng_algorithm", RNG_ALGORITHM)
    if algo != RNG_ALGORITHM:
        raise ConfigError(f"unsupported rng_algorithm {algo!r} (only {RNG_ALGORITHM})")

    ds = _section(data, "dataset")
    mo = _section(data, "model")
    tr = _section(data, "train")
    pp = _section(data, "preproc")
    sv = _section(data, "service")

    profile = mo.get("profile", "desk")
    if profile not in PROFILE_INPUT_SIZE:
        raise ConfigError(f"unknown profile {profile!r}")

    train_cfg = TrainConfig(
        epochs=int(tr.get("epochs", 25)),
        batch_size=int(tr.get("batch_size", 32)),
        learning_rate=float(tr.get("learning_rate", 0.01)),
        patience=int(tr.get("patience", 5)),
        min_delta=float(tr.get("min_delta", 1e-4)),
        seed_init=int(tr.get("seed_init", 1)),
        seed_shuffle=int(tr.get("seed_shuffle", 2)),
        profile=profile,
    )

    side = PROFILE_INPUT_SIZE[profile]
    target = pp.get("target_size", [side, side])
    sigma = pp.get("gaussian_sigma", 1.4)
    pipeline = PipelineConfig(
        threshold=int(pp.get("threshold", 90)),
        canny_low=float(pp.get("canny_low", 50.0)),
        canny_high=float(pp.get("canny_high", 150.0)),
        gaussian_sigma=None if sigma in (None, "off") else float(sigma),
        target_size=tuple(int(v) for v in target),
        stages=tuple(pp.get("stages", DEFAULT_STAGES)),
        debug_dir=pp.get("debug_dir"),
    )

    service = ServiceConfig(
        host=str(sv.get("host", "127.0.0.1")),
        port=int(sv.get("port", 8787)),
        max_body_mb=int(sv.get("max_body_mb", 5)),
    )

    log_level = str(data.get("log_level", "info"))
    if log_level not in LOG_LEVELS:
        raise ConfigError(f"log_level must be one of {LOG_LEVELS}, got {log_level!r}")

    return AppConfig(
        dataset_root=str(ds.get("root", "data")),
        model_path=str(mo.get("path", "model.islm")),
        profile=profile,
        split_ratio=float(tr.get("split_ratio", 0.8)),
        split_seed=int(tr.get("split_seed", 3)),
        history_path=str(tr.get("history_path", "history.csv")),
        timing_in_csv=bool(tr.get("timing_in_csv", True)),
        checkpoint_dir=tr.get("checkpoint_dir"),
        log_level=log_level,
        train=train_cfg,
        pipeline=pipeline,
        service=service,
    )
