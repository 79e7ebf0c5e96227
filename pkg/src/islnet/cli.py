"""Command line interface: inspect | train | eval | predict | synth | serve.

Exit codes are a stable contract for scripting: 0 success, 1 usage error,
2 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .config import load_config
from .data.batches import PreprocCache
from .data.dataset import scan_dataset, stratified_split
from .data.synth import synth_generate
from .errors import IslError
from .metrics import MetricsReport
from .model.manifest import build_profile, infer_shapes
from .model.network import Model
from .model.serialize import load_model, model_id, save_model
from .preproc.pipeline import PipelineConfig, load_image, run_pipeline
from .train.evaluate import evaluate
from .train.history import export_history
from .train.loop import train as run_training


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; this contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    p = _Parser(prog="islnet", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("inspect", help="print the layer/shape/parameter table")
    sp.add_argument("--profile", choices=["table1", "desk"], default="table1")
    sp.add_argument("--classes", type=int, default=35)

    sp = sub.add_parser("train", help="train a model on a dataset directory")
    sp.add_argument("--config", help="YAML config file")
    sp.add_argument("--dataset", help="dataset root (overrides config)")
    sp.add_argument("--model-out", help="model file to write (overrides config)")
    sp.add_argument("--history", help="history CSV to write (overrides config)")
    sp.add_argument("--profile", choices=["table1", "desk"])
    sp.add_argument("--epochs", type=int)
    sp.add_argument("--batch-size", type=int)
    sp.add_argument("--learning-rate", type=float)
    sp.add_argument("--seed-init", type=int)
    sp.add_argument("--seed-shuffle", type=int)
    sp.add_argument("--quiet", action="store_true")

    sp = sub.add_parser("eval", help="evaluate a model on a dataset's splits")
    sp.add_argument("--model", required=True)
    sp.add_argument("--dataset", required=True)
    sp.add_argument("--config")
    sp.add_argument("--json-out", help="write the full metrics report here")

    sp = sub.add_parser("predict", help="classify one image")
    sp.add_argument("--model", required=True)
    sp.add_argument("--image", required=True)
    sp.add_argument("--config")
    sp.add_argument("--top", type=int, default=3)

    sp = sub.add_parser("synth", help="generate a synthetic glyph dataset")
    sp.add_argument("--out", required=True)
    sp.add_argument("--classes", type=int, required=True)
    sp.add_argument("--per-class", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("serve", help="run the HTTP inference service")
    sp.add_argument("--config")
    sp.add_argument("--model", help="model file (overrides config)")
    sp.add_argument("--host")
    sp.add_argument("--port", type=int)
    return p


def _pipeline_for_model(pipeline: PipelineConfig, model: Model) -> PipelineConfig:
    h, w, _ = model.manifest.input_shape
    return replace(pipeline, target_size=(w, h))


def cmd_inspect(args) -> int:
    manifest = build_profile(args.profile, class_count=args.classes)
    rows = infer_shapes(manifest)
    from .nn.spec import param_counts
    print(f"{'Layer':<12} {'Output Shape':<22} {'Param #':>12}")
    shape = manifest.input_shape
    for (layer_id, out_shape), (_, spec) in zip(rows, manifest.layers):
        t, n = param_counts(spec, shape)
        print(f"{layer_id:<12} {str(out_shape):<22} {t + n:>12,}")
        shape = out_shape
    total, trainable, non_trainable = manifest.counts()
    print(f"{'Total parameters':<35} {total:>12,}")
    print(f"{'Trainable parameters':<35} {trainable:>12,}")
    print(f"{'Non-trainable parameters':<35} {non_trainable:>12,}")
    return 0


def cmd_train(args) -> int:
    cfg = load_config(args.config)
    if args.dataset:
        cfg.dataset_root = args.dataset
    if args.model_out:
        cfg.model_path = args.model_out
    if args.history:
        cfg.history_path = args.history
    train_cfg = cfg.train
    overrides = {}
    for flag, name in (("epochs", "epochs"), ("batch_size", "batch_size"),
                       ("learning_rate", "learning_rate"), ("seed_init", "seed_init"),
                       ("seed_shuffle", "seed_shuffle"), ("profile", "profile")):
        val = getattr(args, flag, None)
        if val is not None:
            overrides[name] = val
    if overrides:
        train_cfg = replace(train_cfg, **overrides)
    if "profile" in overrides:
        cfg.profile = overrides["profile"]

    root = Path(cfg.dataset_root)
    if not root.is_dir():
        print(f"islnet train: dataset root {root} does not exist", file=sys.stderr)
        return 2
    index = scan_dataset(root)
    split = stratified_split(index, cfg.split_ratio, cfg.split_seed)
    manifest = build_profile(cfg.profile, class_count=index.class_count,
                             labels=index.classes)
    model = Model.build(manifest, seed=train_cfg.seed_init)
    pipeline = _pipeline_for_model(cfg.pipeline, model)
    log = None if args.quiet else print
    model, history = run_training(model, split, train_cfg, pipeline,
                                  checkpoint_dir=cfg.checkpoint_dir, log=log)
    save_model(model, cfg.model_path)
    export_history(history, cfg.history_path, include_timing=cfg.timing_in_csv)
    best = history.records[history.best_epoch - 1]
    print(f"best epoch {history.best_epoch}: val_loss {best.val_loss:.6f} "
          f"val_accuracy {best.val_accuracy:.4f}"
          + ("  (stopped early)" if history.stopped_early else ""))
    print(f"model written to {cfg.model_path}, history to {cfg.history_path}")
    return 0


def _print_report(name: str, report: MetricsReport) -> None:
    print(f"[{name}] accuracy {report.accuracy:.4f}  "
          f"macro precision {report.macro_precision:.4f}  "
          f"macro recall {report.macro_recall:.4f}  "
          f"macro f1 {report.macro_f1:.4f}")


def cmd_eval(args) -> int:
    cfg = load_config(args.config)
    model = load_model(args.model)
    root = Path(args.dataset)
    if not root.is_dir():
        print(f"islnet eval: dataset root {root} does not exist", file=sys.stderr)
        return 2
    index = scan_dataset(root)
    if index.class_count != model.manifest.class_count:
        print(f"islnet eval: dataset has {index.class_count} classes but the model "
              f"was trained for {model.manifest.class_count}", file=sys.stderr)
        return 2
    if index.classes != model.manifest.labels:
        print(f"islnet eval: dataset labels {index.classes} do not match model "
              f"labels {model.manifest.labels}", file=sys.stderr)
        return 2
    split = stratified_split(index, cfg.split_ratio, cfg.split_seed)
    pipeline = _pipeline_for_model(cfg.pipeline, model)
    cache = PreprocCache()
    reports = {}
    for part_name, samples in (("train", split.train), ("test", split.test)):
        reports[part_name] = evaluate(model, samples, pipeline,
                                      class_labels=index.classes, cache=cache)
        _print_report(part_name, reports[part_name])
    doc = {
        "model": model_id(model),
        "dataset": str(root),
        "split": {"ratio": cfg.split_ratio, "seed": cfg.split_seed},
        "train": reports["train"].to_dict(),
        "test": reports["test"].to_dict(),
    }
    if args.json_out:
        Path(args.json_out).write_text(json.dumps(doc, indent=2) + "\n")
        print(f"report written to {args.json_out}")
    return 0


def cmd_predict(args) -> int:
    cfg = load_config(args.config)
    model = load_model(args.model)
    pipeline = _pipeline_for_model(cfg.pipeline, model)
    img = load_image(args.image)
    tensor = run_pipeline(img, pipeline)
    probs, _ = model.predict(tensor)
    order = probs.array.argsort()[::-1][:max(1, args.top)]
    for i in order:
        print(f"{model.manifest.labels[i]}\t{probs.array[i]:.6f}")
    return 0


def cmd_synth(args) -> int:
    synth_generate(args.out, args.classes, args.per_class, args.seed)
    print(f"wrote {args.classes} x {args.per_class} images under {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    cfg = load_config(args.config)
    if args.model:
        cfg.model_path = args.model
    if args.host:
        cfg.service.host = args.host
    if args.port:
        cfg.service = replace(cfg.service, port=args.port)
    model = load_model(cfg.model_path)
    pipeline = _pipeline_for_model(cfg.pipeline, model)
    app = create_app(model, pipeline, max_body_bytes=cfg.service.max_body_mb * 1024 * 1024)
    uvicorn.run(app, host=cfg.service.host, port=cfg.service.port,
                log_level=cfg.log_level)
    return 0


_COMMANDS = {
    "inspect": cmd_inspect,
    "train": cmd_train,
    "eval": cmd_eval,
    "predict": cmd_predict,
    "synth": cmd_synth,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except IslError as e:
        print(f"islnet {args.command}: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"islnet {args.command}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
