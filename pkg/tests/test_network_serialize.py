import numpy as np
import pytest

from islnet.errors import (ChecksumError, DimensionError, ModelFormatError, StateError,
                           TruncatedError, VersionError)
from islnet.model import Model, build_desk, load_model, model_id, save_model
from islnet.model.serialize import FORMAT_VERSION
from islnet.nn import make_rng


@pytest.fixture(scope="module")
def desk_model():
    return Model.build(build_desk(class_count=10), seed=3)


def _random_input(seed):
    return make_rng(seed).random((64, 64, 1))


# ---------------------------------------------------------------- predict

def test_predict_distribution_contract(desk_model):
    probs, arg = desk_model.predict(_random_input(0))
    assert abs(probs.array.sum() - 1.0) < 1e-9
    assert probs.array.min() > 0
    assert 0 <= arg < 10


def test_predict_deterministic(desk_model):
    x = _random_input(1)
    a, _ = desk_model.predict(x)
    b, _ = desk_model.predict(x)
    assert np.array_equal(a.array, b.array)


def test_predict_requires_infer_mode(desk_model):
    desk_model.set_mode("train")
    try:
        with pytest.raises(StateError):
            desk_model.predict(_random_input(2))
    finally:
        desk_model.set_mode("infer")


def test_predict_wrong_shape(desk_model):
    with pytest.raises(DimensionError):
        desk_model.predict(make_rng(0).random((32, 32, 1)))


def test_same_seed_same_initial_parameters():
    a = Model.build(build_desk(class_count=5), seed=9)
    b = Model.build(build_desk(class_count=5), seed=9)
    for (_, pa), (_, pb) in zip(a.params(), b.params()):
        assert np.array_equal(pa.tensor.array, pb.tensor.array)


def test_infer_mode_never_mutates_running_stats(desk_model):
    before = desk_model.params().checksum()
    desk_model.forward(make_rng(4).random((3, 64, 64, 1)))
    assert desk_model.params().checksum() == before


# ------------------------------------------------------------ file format

def test_round_trip_predictions_bit_identical(desk_model, tmp_path):
    path = tmp_path / "m.islm"
    save_model(desk_model, path)
    loaded = load_model(path)
    for seed in range(10):
        x = _random_input(seed)
        a, _ = desk_model.predict(x)
        b, _ = loaded.predict(x)
        assert np.array_equal(a.array, b.array)
    assert model_id(loaded) == model_id(desk_model)


def test_blob_corruption_detected(desk_model, tmp_path):
    path = tmp_path / "m.islm"
    save_model(desk_model, path)
    data = bytearray(path.read_bytes())
    data[-100] ^= 0xFF                                        # flip a blob byte
    path.write_bytes(bytes(data))
    with pytest.raises(ChecksumError):
        load_model(path)


def test_manifest_corruption_detected(desk_model, tmp_path):
    path = tmp_path / "m.islm"
    save_model(desk_model, path)
    data = bytearray(path.read_bytes())
    data[20] ^= 0x01                                          # inside manifest text
    path.write_bytes(bytes(data))
    with pytest.raises(ChecksumError):
        load_model(path)


def test_newer_version_rejected_cleanly(desk_model, tmp_path):
    import struct
    path = tmp_path / "m.islm"
    save_model(desk_model, path)
    data = bytearray(path.read_bytes())
    data[4:8] = struct.pack("<I", FORMAT_VERSION + 1)
    path.write_bytes(bytes(data))
    with pytest.raises(VersionError):
        load_model(path)


def test_truncation_detected(desk_model, tmp_path):
    path = tmp_path / "m.islm"
    save_model(desk_model, path)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) // 2])
    with pytest.raises(TruncatedError):
        load_model(path)


def test_bad_magic_rejected(desk_model, tmp_path):
    path = tmp_path / "m.islm"
    save_model(desk_model, path)
    data = bytearray(path.read_bytes())
    data[:4] = b"NOPE"
    path.write_bytes(bytes(data))
    with pytest.raises(ModelFormatError):
        load_model(path)
