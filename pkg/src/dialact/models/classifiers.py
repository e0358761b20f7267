"""The three turn classifiers: MLP, CNN, and multi-head self-attention.

Every classifier maps (previous-turn sentence vector, current-turn
representation) to logits over its label set and carries a detachable
classification head: the store entries prefixed "head." are the only ones
replace_head touches.

Models hold parameters and architecture only; training-time randomness
(dropout) is injected by the caller through an explicit generator, so
inference is a pure function of parameters and inputs.
"""

from __future__ import annotations

import numpy as np

from ..corpus.types import LabelSet
from ..corpus.vocab import PAD_ID, WINDOW, Vocabulary
from ..errors import ConfigurationError, DimensionError, VocabularyError
from ..nn import (
    ParamStore,
    Tensor,
    concat,
    conv1d,
    dense,
    dropout,
    gather_rows,
    global_max_pool,
    init_params,
    multi_head_self_attention,
    relu,
)
from ..corpus.io import WordVectorTable

HEAD_PREFIX = "head."
MODEL_KINDS = ("mlp", "cnn", "mhsatt")


def _spawn_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _check_width(name: str, vector: np.ndarray, expected: int) -> None:
    if vector.ndim != 1 or vector.shape[0] != expected:
        raise DimensionError(
            f"{name} has shape {np.asarray(vector).shape}, expected ({expected},)"
        )


def _check_ids(ids: list[int], vocab_size: int) -> None:
    for token_id in ids:
        if not 0 <= token_id < vocab_size:
            raise VocabularyError(
                f"token id {token_id} outside the embedding matrix (size {vocab_size})"
            )


class _Classifier:
    kind: str

    def __init__(self):
        self.store = ParamStore()
        self.label_set: LabelSet
        self.dtype = np.float32

    # -- shared head machinery -------------------------------------------
    def _add_head(self, feature_width: int, label_set: LabelSet, rng) -> None:
        self.label_set = label_set
        self.store.add(HEAD_PREFIX + "W", init_params((len(label_set), feature_width), rng, self.dtype))
        self.store.add(HEAD_PREFIX + "b", init_params((len(label_set),), rng, self.dtype))

    def head_feature_width(self) -> int:
        return self.store[HEAD_PREFIX + "W"].shape[1]

    def head_names(self) -> list[str]:
        return [n for n in self.store.names() if n.startswith(HEAD_PREFIX)]

    def body_names(self) -> list[str]:
        return [n for n in self.store.names() if not n.startswith(HEAD_PREFIX)]

    def body_checksum(self) -> str:
        return self.store.checksum(self.body_names())

    def _head_logits(self, features: Tensor, train: bool, rng) -> Tensor:
        if train and self.dropout_rate > 0:
            if rng is None:
                raise ConfigurationError("training-mode forward needs a dropout generator")
            features = dropout(features, self.dropout_rate, rng)
        return dense(features, self.store[HEAD_PREFIX + "W"], self.store[HEAD_PREFIX + "b"])

    def _as_input(self, vector: np.ndarray) -> Tensor:
        return Tensor(np.asarray(vector, dtype=self.dtype))


class MlpClassifier(_Classifier):
    """Dense network over the concatenated previous and current sentence vectors."""

    kind = "mlp"

    def __init__(
        self,
        embedding_dim: int,
        label_set: LabelSet,
        seed: int,
        hidden: int = 512,
        dropout: float = 0.5,
        dtype=np.float32,
    ):
        super().__init__()
        self.dtype = dtype
        self.embedding_dim = embedding_dim
        self.hidden = hidden
        self.dropout_rate = dropout
        rng = _spawn_rng(seed)
        self.store.add("hidden.W", init_params((hidden, 2 * embedding_dim), rng, dtype))
        self.store.add("hidden.b", init_params((hidden,), rng, dtype))
        self._add_head(hidden, label_set, rng)

    def forward(self, prev_vec, cur_vec, train: bool = False, rng=None) -> Tensor:
        prev_vec = np.asarray(prev_vec)
        cur_vec = np.asarray(cur_vec)
        _check_width("previous-turn vector", prev_vec, self.embedding_dim)
        _check_width("current-turn vector", cur_vec, self.embedding_dim)
        x = concat([self._as_input(prev_vec), self._as_input(cur_vec)])
        hidden = relu(dense(x, self.store["hidden.W"], self.store["hidden.b"]))
        return self._head_logits(hidden, train, rng)

    def hyperparameters(self) -> dict:
        return {
            "embedding_dim": self.embedding_dim,
            "hidden": self.hidden,
            "dropout": self.dropout_rate,
        }


class CnnClassifier(_Classifier):
    """Convolutional encoder over a fixed token window, pooled to one vector."""

    kind = "cnn"

    def __init__(
        self,
        vocab: Vocabulary,
        embedding_dim: int,
        label_set: LabelSet,
        seed: int,
        d_word: int = 128,
        filters: int = 256,
        kernel_width: int = 3,
        window: int = WINDOW,
        dropout: float = 0.5,
        word_vectors: WordVectorTable | None = None,
        dtype=np.float32,
    ):
        super().__init__()
        self.dtype = dtype
        self.vocab = vocab
        self.embedding_dim = embedding_dim
        if word_vectors is not None:
            d_word = word_vectors.dimension
        self.d_word = d_word
        self.filters = filters
        self.kernel_width = kernel_width
        self.window = window
        self.dropout_rate = dropout
        rng = _spawn_rng(seed)
        embedding = init_params((len(vocab), d_word), rng, dtype)
        embedding.data[PAD_ID] = 0.0
        if word_vectors is not None:
            for token_id, token in enumerate(vocab.tokens()):
                pretrained = word_vectors.get(token)
                if pretrained is not None:
                    embedding.data[token_id] = pretrained.astype(dtype)
        self.store.add("embedding", embedding)
        self.store.add("conv.K", init_params((filters, kernel_width, d_word), rng, dtype))
        self.store.add("conv.b", init_params((filters,), rng, dtype))
        self._add_head(filters + embedding_dim, label_set, rng)

    def forward(self, token_ids: list[int], prev_vec, train: bool = False, rng=None) -> Tensor:
        if len(token_ids) != self.window:
            raise DimensionError(f"expected {self.window} token ids, got {len(token_ids)}")
        _check_ids(token_ids, len(self.vocab))
        prev_vec = np.asarray(prev_vec)
        _check_width("previous-turn vector", prev_vec, self.embedding_dim)
        embedded = gather_rows(self.store["embedding"], token_ids)
        convolved = relu(conv1d(embedded, self.store["conv.K"], self.store["conv.b"]))
        turn_embedding = global_max_pool(convolved)
        features = concat([turn_embedding, self._as_input(prev_vec)])
        return self._head_logits(features, train, rng)

    def hyperparameters(self) -> dict:
        return {
            "embedding_dim": self.embedding_dim,
            "d_word": self.d_word,
            "filters": self.filters,
            "kernel_width": self.kernel_width,
            "window": self.window,
            "dropout": self.dropout_rate,
        }


class MhSattClassifier(_Classifier):
    """Self-attention encoder; optionally stacks translated and original windows.

    PAD positions are dropped before attention, so attention weights and the
    max pool see real tokens only; an entirely padded window produces a zero
    turn embedding.
    """

    kind = "mhsatt"

    def __init__(
        self,
        vocab: Vocabulary,
        embedding_dim: int,
        label_set: LabelSet,
        seed: int,
        d_model: int = 128,
        heads: int = 4,
        window: int = WINDOW,
        stacked: bool = True,
        dropout: float = 0.5,
        dtype=np.float32,
    ):
        super().__init__()
        if d_model % heads != 0:
            raise ConfigurationError(f"d_model {d_model} is not divisible by heads {heads}")
        self.dtype = dtype
        self.vocab = vocab
        self.embedding_dim = embedding_dim
        self.d_model = d_model
        self.heads = heads
        self.window = window
        self.stacked = stacked
        self.dropout_rate = dropout
        rng = _spawn_rng(seed)
        embedding = init_params((len(vocab), d_model), rng, dtype)
        embedding.data[PAD_ID] = 0.0
        self.store.add("embedding", embedding)
        for name in ("attn.W_q", "attn.W_k", "attn.W_v", "attn.W_o"):
            self.store.add(name, init_params((d_model, d_model), rng, dtype))
        self._add_head(d_model + embedding_dim, label_set, rng)

    def forward(
        self,
        translated_ids: list[int],
        original_ids: list[int] | None,
        prev_vec,
        train: bool = False,
        rng=None,
    ) -> Tensor:
        if len(translated_ids) != self.window:
            raise DimensionError(f"expected {self.window} translated token ids, got {len(translated_ids)}")
        if original_ids is not None and len(original_ids) != self.window:
            raise DimensionError(f"expected {self.window} original token ids, got {len(original_ids)}")
        window_ids = list(translated_ids) + (list(original_ids) if original_ids is not None else [])
        _check_ids(window_ids, len(self.vocab))
        prev_vec = np.asarray(prev_vec)
        _check_width("previous-turn vector", prev_vec, self.embedding_dim)

        real_ids = [i for i in window_ids if i != PAD_ID]
        if real_ids:
            embedded = gather_rows(self.store["embedding"], real_ids)
            attended = multi_head_self_attention(
                embedded,
                self.store["attn.W_q"],
                self.store["attn.W_k"],
                self.store["attn.W_v"],
                self.store["attn.W_o"],
                self.heads,
            )
            turn_embedding = global_max_pool(attended)
        else:
            turn_embedding = Tensor(np.zeros(self.d_model, dtype=self.dtype))
        features = concat([turn_embedding, self._as_input(prev_vec)])
        return self._head_logits(features, train, rng)

    def hyperparameters(self) -> dict:
        return {
            "embedding_dim": self.embedding_dim,
            "d_model": self.d_model,
            "heads": self.heads,
            "window": self.window,
            "stacked": self.stacked,
            "dropout": self.dropout_rate,
        }


Classifier = MlpClassifier | CnnClassifier | MhSattClassifier


def predict(logits) -> int:
    """Argmax label index; ties go to the lowest index."""
    values = logits.data if isinstance(logits, Tensor) else np.asarray(logits)
    if values.size == 0:
        raise ConfigurationError("cannot predict from empty logits")
    return int(np.argmax(values))


def replace_head(model: Classifier, new_label_set: LabelSet, seed: int) -> Classifier:
    """Swap in a freshly initialized head sized for the new label set.

    Every non-head tensor is left untouched (same objects, same bits); the
    head is always re-created, even for a label set of the same size.
    """
    if len(new_label_set) == 0:
        raise ConfigurationError("new label set is empty")
    feature_width = model.head_feature_width()
    rng = _spawn_rng(seed)
    model.store.replace(HEAD_PREFIX + "W", init_params((len(new_label_set), feature_width), rng, model.dtype))
    model.store.replace(HEAD_PREFIX + "b", init_params((len(new_label_set),), rng, model.dtype))
    model.label_set = new_label_set
    return model
