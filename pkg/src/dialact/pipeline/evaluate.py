"""Accuracy evaluation, confusion matrices, and the majority-class baseline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..corpus import SentenceEmbeddingTable, Turn
from ..corpus.types import LabelSet
from ..errors import ConfigurationError
from ..models.classifiers import Classifier, predict
from .data import Example, examples_for_model, forward_example


@dataclass
class ConfusionMatrix:
    """Rows are gold labels, columns predicted; `unmapped` counts predictions
    that have no column (cross-label evaluation without fine-tuning)."""

    labels: list[str]
    matrix: np.ndarray
    unmapped: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.unmapped is None:
            self.unmapped = np.zeros(len(self.labels), dtype=np.int64)

    @classmethod
    def empty(cls, labels: Sequence[str]) -> "ConfusionMatrix":
        k = len(labels)
        return cls(list(labels), np.zeros((k, k), dtype=np.int64))

    def total(self) -> int:
        return int(self.matrix.sum() + self.unmapped.sum())

    def trace(self) -> int:
        return int(np.trace(self.matrix))

    def to_dict(self) -> dict:
        payload = {"labels": self.labels, "matrix": self.matrix.tolist()}
        if self.unmapped.any():
            payload["unmapped"] = self.unmapped.tolist()
        return payload


@dataclass
class EvalResult:
    accuracy: float
    correct: int
    total: int
    confusion: ConfusionMatrix


def evaluate_examples(model: Classifier, examples: list[Example]) -> EvalResult:
    if not examples:
        raise ConfigurationError("test set is empty")
    confusion = ConfusionMatrix.empty(model.label_set.tags)
    correct = 0
    for example in examples:
        predicted = predict(forward_example(model, example, train=False))
        confusion.matrix[example.label_index, predicted] += 1
        if predicted == example.label_index:
            correct += 1
    total = len(examples)
    return EvalResult(correct / total, correct, total, confusion)


def evaluate_accuracy(
    model: Classifier,
    test_turns: Sequence[Turn],
    embeddings: SentenceEmbeddingTable,
) -> EvalResult:
    """accuracy = correct/total over the turns, with a gold-by-predicted grid."""
    return evaluate_examples(model, examples_for_model(test_turns, model, embeddings))


def evaluate_with_label_map(
    model: Classifier,
    examples: list[Example],
    target_labels: LabelSet,
) -> EvalResult:
    """Score a source-task model on target turns by matching tag strings.

    Source predictions whose tag is not a target tag count as errors and are
    reported in the confusion matrix's unmapped column.
    """
    if not examples:
        raise ConfigurationError("test set is empty")
    mapping: dict[int, int] = {}
    for source_index, tag in enumerate(model.label_set.tags):
        if tag in target_labels:
            mapping[source_index] = target_labels.index(tag)
    if not mapping:
        raise ConfigurationError(
            "no common label tags between the source model and the target task"
        )
    confusion = ConfusionMatrix.empty(target_labels.tags)
    correct = 0
    for example in examples:
        source_pred = predict(forward_example(model, example, train=False))
        target_pred = mapping.get(source_pred)
        if target_pred is None:
            confusion.unmapped[example.label_index] += 1
        else:
            confusion.matrix[example.label_index, target_pred] += 1
            if target_pred == example.label_index:
                correct += 1
    total = len(examples)
    return EvalResult(correct / total, correct, total, confusion)


@dataclass
class MajorityBaseline:
    label: str
    accuracy: float
    confusion: ConfusionMatrix


def majority_class_baseline(
    train_turns: Sequence[Turn],
    test_turns: Sequence[Turn],
    label_set: LabelSet,
) -> MajorityBaseline:
    """Always predict the most frequent training label.

    Ties on the training majority break toward the earlier label-set index.
    Accuracy is exactly the test frequency of that label.
    """
    if not train_turns or not test_turns:
        raise ConfigurationError("majority baseline needs non-empty train and test sets")
    counts = [0] * len(label_set)
    for turn in train_turns:
        counts[label_set.index(turn.label)] += 1
    majority_index = max(range(len(counts)), key=lambda i: (counts[i], -i))
    confusion = ConfusionMatrix.empty(label_set.tags)
    correct = 0
    for turn in test_turns:
        gold = label_set.index(turn.label)
        confusion.matrix[gold, majority_index] += 1
        if gold == majority_index:
            correct += 1
    return MajorityBaseline(
        label_set.tag(majority_index), correct / len(test_turns), confusion
    )
