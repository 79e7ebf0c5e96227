import numpy as np
import pytest

from islnet.data import (CANONICAL_LABELS, batch_slices, glyph_geometry, make_batches,
                         scan_dataset, stratified_split, synth_generate)
from islnet.errors import IngestionError, ParameterError, SplitError


def test_canonical_labels_are_35_digits_then_letters():
    assert len(CANONICAL_LABELS) == 35
    assert CANONICAL_LABELS[:9] == [str(d) for d in range(1, 10)]
    assert CANONICAL_LABELS[9:] == [chr(c) for c in range(65, 91)]
    assert sorted(CANONICAL_LABELS) == CANONICAL_LABELS      # scan order matches


# ------------------------------------------------------------------ scan

def test_scan_single_class(tmp_path):
    d = tmp_path / "A"
    d.mkdir()
    for i in range(3):
        (d / f"img{i}.png").write_bytes(b"")
    idx = scan_dataset(tmp_path)
    assert idx.classes == ["A"]
    assert len(idx.samples) == 3
    assert all(c == 0 for _, c in idx.samples)


def test_scan_empty_root_rejected(tmp_path):
    with pytest.raises(IngestionError):
        scan_dataset(tmp_path)
    with pytest.raises(IngestionError):
        scan_dataset(tmp_path / "missing")


def test_scan_ignores_non_image_files(tmp_path):
    d = tmp_path / "B"
    d.mkdir()
    (d / "ok.png").write_bytes(b"")
    (d / "notes.txt").write_bytes(b"")
    (d / "OK2.JPG").write_bytes(b"")
    idx = scan_dataset(tmp_path)
    assert len(idx.samples) == 2
    assert idx.skipped == 1


def test_scan_label_order_is_lexicographic(tmp_path):
    for name in ("Z", "1", "A", "9"):
        (tmp_path / name).mkdir()
        (tmp_path / name / "x.png").write_bytes(b"")
    idx = scan_dataset(tmp_path)
    assert idx.classes == ["1", "9", "A", "Z"]


def test_scan_full_scale_layout(tmp_path):
    # 35 classes x 1000 files; scanning only stats paths, so this stays cheap
    for label in CANONICAL_LABELS:
        d = tmp_path / label
        d.mkdir()
        for i in range(1000):
            (d / f"{i:04d}.png").touch()
    idx = scan_dataset(tmp_path)
    assert idx.class_count == 35
    assert len(idx.samples) == 35_000
    assert idx.counts == [1000] * 35
    assert idx.classes == CANONICAL_LABELS


# ----------------------------------------------------------------- split

def _fake_index(tmp_path, per_class):
    for name, n in per_class.items():
        d = tmp_path / name
        d.mkdir()
        for i in range(n):
            (d / f"{i}.png").write_bytes(b"")
    return scan_dataset(tmp_path)


def test_split_80_20(tmp_path):
    idx = _fake_index(tmp_path, {"A": 10, "B": 10})
    sp = stratified_split(idx, 0.8, seed=0)
    assert len(sp.train) == 16 and len(sp.test) == 4


def test_split_is_partition(tmp_path):
    idx = _fake_index(tmp_path, {"A": 7, "B": 9, "C": 5})
    sp = stratified_split(idx, 0.8, seed=1)
    train_set = {str(p) for p, _ in sp.train}
    test_set = {str(p) for p, _ in sp.test}
    assert not train_set & test_set
    assert len(train_set | test_set) == len(idx.samples)


def test_split_deterministic(tmp_path):
    idx = _fake_index(tmp_path, {"A": 8, "B": 8})
    a = stratified_split(idx, 0.8, seed=42)
    b = stratified_split(idx, 0.8, seed=42)
    assert [str(p) for p, _ in a.train] == [str(p) for p, _ in b.train]
    c = stratified_split(idx, 0.8, seed=43)
    assert [str(p) for p, _ in a.train] != [str(p) for p, _ in c.train]


def test_split_rounding_half_up(tmp_path):
    idx = _fake_index(tmp_path, {"A": 5})                    # 0.5*5 = 2.5 -> 3
    sp = stratified_split(idx, 0.5, seed=0)
    assert len(sp.train) == 3 and len(sp.test) == 2


def test_split_small_class_rejected(tmp_path):
    idx = _fake_index(tmp_path, {"A": 5, "TINY": 1})
    with pytest.raises(SplitError, match="TINY"):
        stratified_split(idx, 0.8, seed=0)


def test_split_bad_ratio(tmp_path):
    idx = _fake_index(tmp_path, {"A": 4})
    with pytest.raises(SplitError):
        stratified_split(idx, 1.0, seed=0)


# --------------------------------------------------------------- batches

def test_batch_slices_ceiling_division():
    slices = batch_slices(35_000, 32)
    assert len(slices) == 1094
    assert slices[-1] == (34_976, 35_000)                    # short final batch of 24
    assert batch_slices(10, 10) == [(0, 10)]
    assert batch_slices(3, 1) == [(0, 1), (1, 2), (2, 3)]


def test_batch_slices_bad_size():
    with pytest.raises(ParameterError):
        batch_slices(10, 0)


def test_batches_cover_every_sample_once(synth_small, pipeline64):
    sp = stratified_split(scan_dataset(synth_small), 0.8, seed=2)
    batches = list(make_batches(sp.train, 8, 5, pipeline64, epoch=0))
    labels = [l for b in batches for l in b.labels]
    assert sorted(labels) == sorted(c for _, c in sp.train)
    assert [len(b.labels) for b in batches] == [8, 8, 8, 8]


def test_batches_deterministic_per_seed_and_epoch(synth_small, pipeline64):
    sp = stratified_split(scan_dataset(synth_small), 0.8, seed=2)
    a = [b.labels for b in make_batches(sp.train, 8, 5, pipeline64, epoch=1)]
    b = [b.labels for b in make_batches(sp.train, 8, 5, pipeline64, epoch=1)]
    c = [b.labels for b in make_batches(sp.train, 8, 5, pipeline64, epoch=2)]
    assert a == b
    assert a != c                                            # new epoch, new order


def test_batches_input_shape_and_values(synth_small, pipeline64):
    sp = stratified_split(scan_dataset(synth_small), 0.8, seed=2)
    batch = next(make_batches(sp.train, 4, None, pipeline64))
    assert batch.inputs.shape == (4, 64, 64, 1)
    assert set(np.unique(batch.inputs)) <= {0.0, 1.0}


def test_unreadable_image_error_names_path(tmp_path, pipeline64):
    d = tmp_path / "A"
    d.mkdir()
    bad = d / "broken.png"
    bad.write_bytes(b"not a png")
    with pytest.raises(IngestionError, match="broken.png"):
        list(make_batches([(bad, 0)], 1, None, pipeline64))


# ----------------------------------------------------------------- synth

def test_synth_counts_and_layout(tmp_path):
    out = tmp_path / "ds"
    synth_generate(out, classes=5, per_class=4, seed=7)
    dirs = sorted(p.name for p in out.iterdir())
    assert dirs == ["1", "2", "3", "4", "5"]
    assert sum(1 for d in out.iterdir() for _ in d.iterdir()) == 20


def test_synth_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    synth_generate(a, classes=2, per_class=3, seed=9)
    synth_generate(b, classes=2, per_class=3, seed=9)
    for fa, fb in zip(sorted(a.rglob("*.png")), sorted(b.rglob("*.png"))):
        assert fa.read_bytes() == fb.read_bytes()


def test_synth_distinct_seeds_differ(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    synth_generate(a, classes=2, per_class=1, seed=1)
    synth_generate(b, classes=2, per_class=1, seed=2)
    files_a = sorted(a.rglob("*.png"))
    files_b = sorted(b.rglob("*.png"))
    assert any(fa.read_bytes() != fb.read_bytes() for fa, fb in zip(files_a, files_b))


def test_synth_class_range_validated(tmp_path):
    with pytest.raises(ParameterError):
        synth_generate(tmp_path, classes=1, per_class=1)
    with pytest.raises(ParameterError):
        synth_generate(tmp_path, classes=36, per_class=1)


def test_glyph_geometry_distinct_for_all_35():
    combos = {glyph_geometry(i) for i in range(35)}
    assert len(combos) == 35
