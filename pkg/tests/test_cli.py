import json

import pytest

from islnet.cli import main
from islnet.model import load_model


def test_inspect_table1_prints_totals(capsys):
    assert main(["inspect", "--profile", "table1"]) == 0
    out = capsys.readouterr().out
    assert "30,155,955" in out
    assert "30,155,907" in out
    assert "(254, 254, 24)" in out
    assert "(7, 7, 256)" in out


def test_inspect_desk_is_consistent(capsys):
    assert main(["inspect", "--profile", "desk", "--classes", "10"]) == 0
    out = capsys.readouterr().out
    assert "(62, 62, 6)" in out
    assert "Total parameters" in out


def test_inspect_unknown_profile_is_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["inspect", "--profile", "resnet"])
    assert e.value.code == 1


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["transmogrify"])
    assert e.value.code == 1


def test_synth_flags(tmp_path, capsys):
    out = tmp_path / "ds"
    assert main(["synth", "--out", str(out), "--classes", "3",
                 "--per-class", "2", "--seed", "7"]) == 0
    assert sum(1 for _ in out.rglob("*.png")) == 6


def test_synth_bad_classes_is_runtime_error(tmp_path, capsys):
    rc = main(["synth", "--out", str(tmp_path / "x"), "--classes", "1", "--per-class", "2"])
    assert rc == 2


def test_train_missing_dataset_names_path(tmp_path, capsys):
    rc = main(["train", "--dataset", str(tmp_path / "nowhere"),
               "--model-out", str(tmp_path / "m.islm")])
    assert rc == 2
    assert "nowhere" in capsys.readouterr().err


@pytest.fixture(scope="module")
def trained(tmp_path_factory, synth_small):
    """A tiny end-to-end training run through the CLI."""
    out = tmp_path_factory.mktemp("cli_train")
    model_path = out / "model.islm"
    history_path = out / "history.csv"
    rc = main(["train", "--dataset", str(synth_small),
               "--model-out", str(model_path), "--history", str(history_path),
               "--profile", "desk", "--epochs", "2", "--batch-size", "16", "--quiet"])
    assert rc == 0
    return model_path, history_path, synth_small


def test_cli_train_writes_artifacts(trained):
    model_path, history_path, _ = trained
    assert model_path.exists()
    assert history_path.exists()
    model = load_model(model_path)
    assert model.manifest.class_count == 4


def test_cli_eval_prints_and_writes_json(trained, tmp_path, capsys):
    model_path, _, dataset = trained
    json_out = tmp_path / "report.json"
    rc = main(["eval", "--model", str(model_path), "--dataset", str(dataset),
               "--json-out", str(json_out)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "[train]" in out and "[test]" in out
    doc = json.loads(json_out.read_text())
    assert set(doc) == {"model", "dataset", "split", "train", "test"}
    assert 0.0 <= doc["test"]["accuracy"] <= 1.0
    assert len(doc["test"]["classes"]) == 4


def test_cli_eval_class_mismatch_fails(trained, tmp_path, capsys):
    model_path, _, _ = trained
    from islnet.data import synth_generate
    other = tmp_path / "other"
    synth_generate(other, classes=3, per_class=2, seed=1)
    rc = main(["eval", "--model", str(model_path), "--dataset", str(other)])
    assert rc == 2
    assert "classes" in capsys.readouterr().err


def test_cli_predict_top3_descending(trained, capsys):
    model_path, _, dataset = trained
    image = next(dataset.rglob("*.png"))
    assert main(["predict", "--model", str(model_path), "--image", str(image)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    probs = [float(ln.split("\t")[1]) for ln in lines]
    assert probs == sorted(probs, reverse=True)


def test_cli_predict_repeated_identical(trained, capsys):
    model_path, _, dataset = trained
    image = next(dataset.rglob("*.png"))
    main(["predict", "--model", str(model_path), "--image", str(image)])
    first = capsys.readouterr().out
    main(["predict", "--model", str(model_path), "--image", str(image)])
    assert capsys.readouterr().out == first


def test_cli_predict_non_image_fails(trained, tmp_path, capsys):
    model_path, _, _ = trained
    bad = tmp_path / "not_an_image.png"
    bad.write_text("hello")
    rc = main(["predict", "--model", str(model_path), "--image", str(bad)])
    assert rc == 2


def test_cli_config_file_roundtrip(tmp_path, synth_small):
    cfg = tmp_path / "run.yaml"
    cfg.write_text(
        "config_version: 1\n"
        f"dataset:\n  root: {synth_small}\n"
        "model:\n  profile: desk\n"
        f"  path: {tmp_path / 'm.islm'}\n"
        "train:\n  epochs: 1\n  batch_size: 16\n"
        f"  history_path: {tmp_path / 'h.csv'}\n")
    assert main(["train", "--config", str(cfg), "--quiet"]) == 0
    assert (tmp_path / "m.islm").exists()


def test_cli_bad_config_is_runtime_error(tmp_path, capsys):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("config_version: 99\n")
    rc = main(["train", "--config", str(cfg)])
    assert rc == 2


def test_cli_serve_aborts_on_model_load_failure(tmp_path, capsys):
    missing = tmp_path / "missing.islm"
    rc = main(["serve", "--model", str(missing)])
    assert rc == 2

    corrupt = tmp_path / "corrupt.islm"
    corrupt.write_bytes(b"ISLM garbage")
    rc = main(["serve", "--model", str(corrupt)])
    assert rc == 2


def test_cli_rejects_unknown_rng_algorithm(tmp_path):
    cfg = tmp_path / "rng.yaml"
    cfg.write_text("rng_algorithm: mersenne\n")
    assert main(["train", "--config", str(cfg)]) == 2


def test_cli_rejects_bad_service_port(tmp_path):
    cfg = tmp_path / "port.yaml"
    cfg.write_text("service:\n  port: 70000\n")
    assert main(["train", "--config", str(cfg)]) == 2
