import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from islnet.data import PreprocCache, scan_dataset, stratified_split, synth_generate
from islnet.model import Model, build_desk
from islnet.preproc import PipelineConfig
from islnet.train import TrainConfig, train


@pytest.fixture(scope="session")
def pipeline64():
    return PipelineConfig(target_size=(64, 64))


@pytest.fixture(scope="session")
def synth_small(tmp_path_factory):
    """4 classes x 10 images; enough for split/batch/training plumbing tests."""
    root = tmp_path_factory.mktemp("synth_small")
    synth_generate(root, classes=4, per_class=10, seed=11)
    return root


@pytest.fixture(scope="session")
def overfit_run(synth_small, pipeline64):
    """The 32-sample single-batch overfit run, shared by train and acceptance tests.

    Dropout is disabled via the manifest rates so the optimization is
    deterministic gradient descent; that is the standard setup for an
    overfit sanity check and the rates are configuration, not architecture.
    """
    idx = scan_dataset(synth_small)
    split = stratified_split(idx, 0.8, seed=1)   # 32 train / 8 test
    manifest = build_desk(class_count=4, dropout_rates=(0, 0, 0, 0, 0),
                          labels=idx.classes)
    model = Model.build(manifest, seed=5)
    cfg = TrainConfig(epochs=50, batch_size=32, learning_rate=0.005, patience=10_000)
    cache = PreprocCache()
    model, history = train(model, split, cfg, pipeline64, cache=cache)
    return model, history, split, cache
