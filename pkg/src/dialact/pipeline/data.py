"""Turning corpora into per-model training/evaluation examples."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..corpus import (
    ORIGINAL_PREFIX,
    SentenceEmbeddingTable,
    TRANSLATED_PREFIX,
    Turn,
    Vocabulary,
    encode_turn_tokens,
    pair_with_previous,
)
from ..corpus.types import LabelSet
from ..errors import ConfigurationError, MissingEmbeddingError
from ..models.classifiers import Classifier
from ..nn import Tensor


@dataclass
class Example:
    turn: Turn
    prev: np.ndarray
    label_index: int
    cur: np.ndarray | None = None  # mlp current-turn sentence vector
    translated_ids: list[int] | None = None
    original_ids: list[int] | None = None


def build_examples(
    turns: Sequence[Turn],
    label_set: LabelSet,
    embeddings: SentenceEmbeddingTable,
    model_kind: str,
    vocab: Vocabulary | None = None,
    window: int = 15,
    stacked: bool = False,
) -> list[Example]:
    """Encode turns for one model kind; context vectors come from the table."""
    if model_kind != "mlp" and vocab is None:
        raise ConfigurationError(f"{model_kind} examples need a vocabulary")
    examples = []
    for turn in turns:
        prev = pair_with_previous(turn, embeddings)
        label_index = label_set.index(turn.label)
        if model_kind == "mlp":
            try:
                cur = embeddings.get(turn.dialogue_id, turn.turn_index)
            except MissingEmbeddingError:
                raise MissingEmbeddingError(
                    f"no sentence embedding for turn ({turn.dialogue_id}, {turn.turn_index})"
                ) from None
            examples.append(Example(turn, prev, label_index, cur=cur))
        elif model_kind == "cnn":
            ids = encode_turn_tokens(turn.classifier_text(), vocab, window)
            examples.append(Example(turn, prev, label_index, translated_ids=ids))
        elif model_kind == "mhsatt":
            if stacked:
                translated = encode_turn_tokens(
                    turn.classifier_text(), vocab, window, prefix=TRANSLATED_PREFIX
                )
                original = encode_turn_tokens(
                    turn.text_original, vocab, window, prefix=ORIGINAL_PREFIX
                )
            else:
                translated = encode_turn_tokens(turn.classifier_text(), vocab, window)
                original = None
            examples.append(
                Example(turn, prev, label_index, translated_ids=translated, original_ids=original)
            )
        else:
            raise ConfigurationError(f"unknown model kind {model_kind!r}")
    return examples


def examples_for_model(
    turns: Sequence[Turn],
    model: Classifier,
    embeddings: SentenceEmbeddingTable,
    label_set: LabelSet | None = None,
) -> list[Example]:
    """Encode turns against a built model's vocabulary and window."""
    return build_examples(
        turns,
        label_set if label_set is not None else model.label_set,
        embeddings,
        model.kind,
        vocab=getattr(model, "vocab", None),
        window=getattr(model, "window", 15),
        stacked=getattr(model, "stacked", False),
    )


def forward_example(model: Classifier, example: Example, train: bool = False, rng=None) -> Tensor:
    if model.kind == "mlp":
        return model.forward(example.prev, example.cur, train=train, rng=rng)
    if model.kind == "cnn":
        return model.forward(example.translated_ids, example.prev, train=train, rng=rng)
    return model.forward(
        example.translated_ids, example.original_ids, example.prev, train=train, rng=rng
    )
