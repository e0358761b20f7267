"""The two training phases: initial source training and target fine-tuning."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus import Corpus, SentenceEmbeddingTable, WordVectorTable, build_vocab
from ..corpus.types import LabelSet
from ..errors import ConfigurationError
from ..models.classifiers import (
    Classifier,
    CnnClassifier,
    MhSattClassifier,
    MlpClassifier,
    replace_head,
)
from ..nn import adam_step, record, softmax_cross_entropy
from .config import TrainConfig
from .data import Example, build_examples, examples_for_model, forward_example


@dataclass
class TrainingRun:
    model: Classifier
    epoch_losses: list[float]


def _stream_rngs(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    shuffle_seq, dropout_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(shuffle_seq), np.random.default_rng(dropout_seq)


def train_on_examples(
    model: Classifier,
    examples: list[Example],
    config: TrainConfig,
) -> list[float]:
    """Mini-batch Adam on softmax cross-entropy; returns per-epoch mean loss.

    freeze_policy=head_only confines updates to the classification head;
    everything is deterministic for a fixed seed.
    """
    if not examples:
        raise ConfigurationError("no training examples")
    names = model.head_names() if config.freeze_policy == "head_only" else None
    shuffle_rng, dropout_rng = _stream_rngs(config.seed)
    losses: list[float] = []
    n = len(examples)
    for _ in range(config.epochs):
        order = shuffle_rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            model.store.zero_grad()
            for i in batch:
                example = examples[i]
                with record() as tape:
                    logits = forward_example(model, example, train=True, rng=dropout_rng)
                    loss, _ = softmax_cross_entropy(logits, example.label_index)
                    tape.backward(loss)
                epoch_loss += float(loss.data)
            model.store.scale_grads(1.0 / len(batch), names)
            adam_step(model.store, config.learning_rate, names=names)
        losses.append(epoch_loss / n)
    return losses


def build_model(
    config: TrainConfig,
    label_set: LabelSet,
    embedding_dim: int,
    corpus: Corpus | None = None,
    word_vectors: WordVectorTable | None = None,
) -> Classifier:
    """Fresh classifier of the configured kind; token models get a corpus vocab."""
    if config.model == "mlp":
        return MlpClassifier(
            embedding_dim=embedding_dim,
            label_set=label_set,
            seed=config.seed,
            hidden=config.hidden,
            dropout=config.dropout,
        )
    if corpus is None:
        raise ConfigurationError(f"{config.model} needs a corpus to build its vocabulary")
    if config.model == "cnn":
        vocab = build_vocab(corpus, field="classifier")
        return CnnClassifier(
            vocab=vocab,
            embedding_dim=embedding_dim,
            label_set=label_set,
            seed=config.seed,
            d_word=config.d_word,
            filters=config.filters,
            kernel_width=config.kernel_width,
            window=config.window,
            dropout=config.dropout,
            word_vectors=word_vectors,
        )
    vocab = build_vocab(corpus, field="classifier", bilingual=config.stacked)
    return MhSattClassifier(
        vocab=vocab,
        embedding_dim=embedding_dim,
        label_set=label_set,
        seed=config.seed,
        d_model=config.d_model,
        heads=config.heads,
        window=config.window,
        stacked=config.stacked,
        dropout=config.dropout,
    )


def train_initial(
    corpus: Corpus,
    config: TrainConfig,
    embeddings: SentenceEmbeddingTable,
    word_vectors: WordVectorTable | None = None,
) -> TrainingRun:
    """Initial phase: train a fresh classifier on the source corpus."""
    if len(corpus) == 0:
        raise ConfigurationError("training corpus is empty")
    model = build_model(config, corpus.label_set, embeddings.dimension, corpus, word_vectors)
    examples = examples_for_model(corpus.turns(), model, embeddings)
    losses = train_on_examples(model, examples, config)
    return TrainingRun(model, losses)


def finetune(
    model: Classifier,
    target_corpus: Corpus,
    config: TrainConfig,
    embeddings: SentenceEmbeddingTable,
) -> TrainingRun:
    """Fine-tuning phase: swap the head for the target labels and keep training.

    The head is always replaced (seeded by config.seed); freeze_policy decides
    whether body tensors may move. Token models keep their transferred
    vocabulary, so unseen target words map to UNK.
    """
    if len(target_corpus) == 0:
        raise ConfigurationError("target corpus has no examples")
    if model.kind != config.model:
        raise ConfigurationError(
            f"config is for model kind {config.model!r} but the checkpoint holds {model.kind!r}"
        )
    replace_head(model, target_corpus.label_set, config.seed)
    examples = examples_for_model(target_corpus.turns(), model, embeddings)
    losses = train_on_examples(model, examples, config)
    return TrainingRun(model, losses)
