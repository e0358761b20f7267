"""Checkpoint round trips, corruption handling, architecture tags."""

import struct

import numpy as np
import pytest

from dialact.corpus import LabelSet, PAD_ID, Vocabulary
from dialact.errors import CheckpointError
from dialact.models import (
    CnnClassifier,
    MhSattClassifier,
    MlpClassifier,
    clone_model,
    load_checkpoint,
    save_checkpoint,
    save_checkpoint_bytes,
)

LABELS = LabelSet(["A", "B", "C", "D"])


def make_models():
    vocab = Vocabulary([f"tok{i}" for i in range(10)])
    return [
        MlpClassifier(embedding_dim=6, label_set=LABELS, seed=4, hidden=5),
        CnnClassifier(
            vocab=vocab, embedding_dim=6, label_set=LABELS, seed=4, d_word=4, filters=3, kernel_width=2
        ),
        MhSattClassifier(
            vocab=vocab, embedding_dim=6, label_set=LABELS, seed=4, d_model=4, heads=2, stacked=False
        ),
    ]


def forward_anything(model, rng):
    prev = rng.normal(size=6).astype(np.float32)
    if model.kind == "mlp":
        return model.forward(prev, rng.normal(size=6).astype(np.float32)).data
    ids = [int(i) for i in rng.integers(2, 10, size=model.window)]
    if model.kind == "cnn":
        return model.forward(ids, prev).data
    return model.forward(ids, None, prev).data


@pytest.mark.parametrize("index", [0, 1, 2], ids=["mlp", "cnn", "mhsatt"])
def test_round_trip_outputs_bit_identical(tmp_path, index):
    model = make_models()[index]
    path = tmp_path / "model.ckpt"
    save_checkpoint(model, path)
    restored = load_checkpoint(path)
    assert restored.kind == model.kind
    assert restored.label_set == model.label_set
    rng = np.random.default_rng(77)
    for _ in range(25):
        state = rng.bit_generator.state
        a = forward_anything(model, rng)
        rng.bit_generator.state = state
        b = forward_anything(restored, rng)
        assert np.array_equal(a, b)


def test_truncated_file_is_corrupt(tmp_path):
    model = make_models()[0]
    data = save_checkpoint_bytes(model)
    path = tmp_path / "broken.ckpt"
    path.write_bytes(data[: len(data) - 17])
    with pytest.raises(CheckpointError, match="truncated"):
        load_checkpoint(path)


def test_trailing_garbage_is_corrupt(tmp_path):
    data = save_checkpoint_bytes(make_models()[0]) + b"extra"
    path = tmp_path / "trail.ckpt"
    path.write_bytes(data)
    with pytest.raises(CheckpointError, match="trailing"):
        load_checkpoint(path)


def test_bad_magic_is_corrupt(tmp_path):
    path = tmp_path / "junk.ckpt"
    path.write_bytes(b"NOPE" + b"\x00" * 60)
    with pytest.raises(CheckpointError, match="magic"):
        load_checkpoint(path)


def test_version_mismatch_rejected(tmp_path):
    data = bytearray(save_checkpoint_bytes(make_models()[0]))
    data[4:8] = struct.pack("<I", 99)
    path = tmp_path / "future.ckpt"
    path.write_bytes(bytes(data))
    with pytest.raises(CheckpointError, match="version"):
        load_checkpoint(path)


def test_architecture_mismatch_on_expected_kind(tmp_path):
    path = tmp_path / "mlp.ckpt"
    save_checkpoint(make_models()[0], path)
    with pytest.raises(CheckpointError, match="architecture"):
        load_checkpoint(path, expect_kind="cnn")


def test_clone_is_independent(tmp_path):
    model = make_models()[0]
    twin = clone_model(model)
    assert twin.store.checksum() == model.store.checksum()
    twin.store["head.W"].data[:] = 0.0
    assert twin.store.checksum() != model.store.checksum()


def test_vocab_survives_round_trip(tmp_path):
    model = make_models()[1]
    path = tmp_path / "cnn.ckpt"
    save_checkpoint(model, path)
    restored = load_checkpoint(path, expect_kind="cnn")
    assert restored.vocab == model.vocab
    assert restored.vocab.id("tok3") == model.vocab.id("tok3")
    assert PAD_ID == 0
