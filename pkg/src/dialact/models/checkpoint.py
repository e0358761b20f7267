"""Binary model checkpoints with bit-exact round trips.

Byte layout (all integers little-endian):

    offset 0   magic           4 bytes  b"DACT"
    +4         format version  uint32
    +8         metadata size   uint32
    +12        metadata        UTF-8 JSON (architecture, hyperparameters,
                               labels, vocab token list or null)
    ...        tensor count    uint32
    per tensor:
               name size       uint16
               name            UTF-8
               rank            uint8
               dims            rank x uint32
               values          float32 LE, row-major

Trailing bytes after the last tensor make the file corrupt. The format
version must match exactly.
"""

from __future__ import annotations

import io
import json
import struct
from pathlib import Path

import numpy as np

from ..corpus.types import LabelSet
from ..corpus.vocab import Vocabulary
from ..errors import CheckpointError
from ..nn import Tensor
from .classifiers import Classifier, CnnClassifier, MhSattClassifier, MlpClassifier

MAGIC = b"DACT"
FORMAT_VERSION = 1


def _metadata(model: Classifier) -> dict:
    vocab = getattr(model, "vocab", None)
    return {
        "architecture": model.kind,
        "hyperparameters": model.hyperparameters(),
        "labels": model.label_set.tags,
        "vocab": vocab.tokens() if vocab is not None else None,
    }


def save_checkpoint_bytes(model: Classifier) -> bytes:
    buffer = io.BytesIO()
    buffer.write(MAGIC)
    buffer.write(struct.pack("<I", FORMAT_VERSION))
    meta = json.dumps(_metadata(model), sort_keys=True, ensure_ascii=False).encode("utf-8")
    buffer.write(struct.pack("<I", len(meta)))
    buffer.write(meta)
    names = model.store.names()
    buffer.write(struct.pack("<I", len(names)))
    for name in names:
        tensor = model.store[name]
        encoded = name.encode("utf-8")
        buffer.write(struct.pack("<H", len(encoded)))
        buffer.write(encoded)
        buffer.write(struct.pack("<B", tensor.ndim))
        for dim in tensor.shape:
            buffer.write(struct.pack("<I", dim))
        buffer.write(np.ascontiguousarray(tensor.data, dtype="<f4").tobytes())
    return buffer.getvalue()


def save_checkpoint(model: Classifier, path: str | Path) -> None:
    Path(path).write_bytes(save_checkpoint_bytes(model))


def _read(buffer: io.BytesIO, size: int, what: str) -> bytes:
    data = buffer.read(size)
    if len(data) != size:
        raise CheckpointError(f"corrupt checkpoint: truncated while reading {what}")
    return data


def _build_blank(meta: dict) -> Classifier:
    architecture = meta.get("architecture")
    hyper = meta.get("hyperparameters", {})
    labels = LabelSet(meta["labels"])
    vocab_tokens = meta.get("vocab")
    vocab = Vocabulary.from_id_ordered_tokens(vocab_tokens) if vocab_tokens else None
    try:
        if architecture == "mlp":
            return MlpClassifier(
                embedding_dim=hyper["embedding_dim"],
                label_set=labels,
                seed=0,
                hidden=hyper["hidden"],
                dropout=hyper["dropout"],
            )
        if architecture == "cnn":
            return CnnClassifier(
                vocab=vocab,
                embedding_dim=hyper["embedding_dim"],
                label_set=labels,
                seed=0,
                d_word=hyper["d_word"],
                filters=hyper["filters"],
                kernel_width=hyper["kernel_width"],
                window=hyper["window"],
                dropout=hyper["dropout"],
            )
        if architecture == "mhsatt":
            return MhSattClassifier(
                vocab=vocab,
                embedding_dim=hyper["embedding_dim"],
                label_set=labels,
                seed=0,
                d_model=hyper["d_model"],
                heads=hyper["heads"],
                window=hyper["window"],
                stacked=hyper["stacked"],
                dropout=hyper["dropout"],
            )
    except (KeyError, TypeError, AttributeError) as exc:
        raise CheckpointError(f"corrupt checkpoint: bad metadata ({exc})") from None
    raise CheckpointError(f"unknown architecture tag {architecture!r}")


def load_checkpoint_bytes(data: bytes, expect_kind: str | None = None) -> Classifier:
    buffer = io.BytesIO(data)
    if _read(buffer, 4, "magic") != MAGIC:
        raise CheckpointError("corrupt checkpoint: bad magic")
    (version,) = struct.unpack("<I", _read(buffer, 4, "version"))
    if version != FORMAT_VERSION:
        raise CheckpointError(f"checkpoint format version {version} not supported (expected {FORMAT_VERSION})")
    (meta_size,) = struct.unpack("<I", _read(buffer, 4, "metadata size"))
    try:
        meta = json.loads(_read(buffer, meta_size, "metadata").decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise CheckpointError(f"corrupt checkpoint: unreadable metadata ({exc})") from None
    if expect_kind is not None and meta.get("architecture") != expect_kind:
        raise CheckpointError(
            f"architecture mismatch: checkpoint holds {meta.get('architecture')!r}, expected {expect_kind!r}"
        )
    model = _build_blank(meta)
    (count,) = struct.unpack("<I", _read(buffer, 4, "tensor count"))
    loaded: dict[str, np.ndarray] = {}
    for _ in range(count):
        (name_size,) = struct.unpack("<H", _read(buffer, 2, "tensor name size"))
        name = _read(buffer, name_size, "tensor name").decode("utf-8")
        (rank,) = struct.unpack("<B", _read(buffer, 1, "tensor rank"))
        shape = tuple(struct.unpack("<I", _read(buffer, 4, "tensor dim"))[0] for _ in range(rank))
        n_values = int(np.prod(shape)) if shape else 1
        raw = _read(buffer, 4 * n_values, f"tensor {name!r} values")
        loaded[name] = np.frombuffer(raw, dtype="<f4").reshape(shape).copy()
    if buffer.read(1):
        raise CheckpointError("corrupt checkpoint: trailing bytes after last tensor")
    expected = set(model.store.names())
    if set(loaded) != expected:
        missing = sorted(expected - set(loaded))
        extra = sorted(set(loaded) - expected)
        raise CheckpointError(
            f"tensor names do not match the architecture (missing {missing}, unexpected {extra})"
        )
    for name, values in loaded.items():
        tensor = model.store[name]
        if tensor.shape != values.shape:
            raise CheckpointError(
                f"tensor {name!r} has shape {values.shape}, architecture expects {tensor.shape}"
            )
        model.store.replace(name, Tensor(values, requires_grad=True, name=name))
    return model


def load_checkpoint(path: str | Path, expect_kind: str | None = None) -> Classifier:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from None
    return load_checkpoint_bytes(data, expect_kind)


def clone_model(model: Classifier) -> Classifier:
    """Independent copy via an in-memory checkpoint round trip."""
    return load_checkpoint_bytes(save_checkpoint_bytes(model))
