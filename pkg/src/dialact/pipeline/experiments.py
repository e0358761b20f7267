"""Repeated runs, cross-validation, and the transfer condition suite."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable

from ..corpus import Corpus, SentenceEmbeddingTable, WordVectorTable, kfold_split
from ..corpus.types import LabelSet, Turn
from ..errors import ConfigurationError
from ..models.checkpoint import load_checkpoint_bytes, save_checkpoint_bytes
from ..models.classifiers import Classifier
from .config import DEFAULT_RUNS, TrainConfig
from .data import examples_for_model
from .evaluate import (
    ConfusionMatrix,
    evaluate_examples,
    evaluate_with_label_map,
    majority_class_baseline,
)
from .train import build_model, finetune, train_on_examples

CONDITIONS = ("majority", "scratch", "no_finetune", "finetune")


def mean_std(values: list[float]) -> tuple[float, float]:
    """Mean and sample standard deviation (n-1 denominator; 0.0 for one run)."""
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    return mean, math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1))


@dataclass
class RunResult:
    accuracies: list[float]
    mean: float
    std: float
    confusion: ConfusionMatrix | None = None  # from the last run
    degenerate_std: bool = False  # std reported as 0 because runs == 1
    pooled_accuracy: float | None = None  # cross-validation only

    @classmethod
    def from_accuracies(
        cls,
        accuracies: list[float],
        confusion: ConfusionMatrix | None = None,
        pooled_accuracy: float | None = None,
    ) -> "RunResult":
        mean, std = mean_std(accuracies)
        return cls(
            accuracies=list(accuracies),
            mean=mean,
            std=std,
            confusion=confusion,
            degenerate_std=len(accuracies) == 1,
            pooled_accuracy=pooled_accuracy,
        )


def run_repeated(
    run_fn: Callable[[int], tuple[float, ConfusionMatrix | None]],
    runs: int = DEFAULT_RUNS,
    seed: int = 0,
) -> RunResult:
    """Execute run_fn with seeds seed+0 .. seed+runs-1 and aggregate."""
    if runs < 1:
        raise ConfigurationError(f"runs must be at least 1, got {runs}")
    accuracies: list[float] = []
    confusion: ConfusionMatrix | None = None
    for i in range(runs):
        accuracy, confusion = run_fn(seed + i)
        accuracies.append(accuracy)
    return RunResult.from_accuracies(accuracies, confusion)


def cross_validate(
    corpus: Corpus,
    k: int,
    config: TrainConfig,
    embeddings: SentenceEmbeddingTable,
    source_model: Classifier | None = None,
    word_vectors: WordVectorTable | None = None,
) -> RunResult:
    """k-fold evaluation: train (or fine-tune) on k-1 folds, test on the held-out one.

    Every fold starts from a fresh model (or a fresh copy of the source
    model); fold accuracies feed mean/std and the pooled accuracy is
    total correct / total.
    """
    turns = corpus.turns()
    folds = kfold_split(turns, k, config.seed)
    source_bytes = save_checkpoint_bytes(source_model) if source_model is not None else None
    accuracies: list[float] = []
    confusion: ConfusionMatrix | None = None
    correct_total = 0
    count_total = 0
    for fold_index, test_turns in enumerate(folds):
        train_turns = [t for j, fold in enumerate(folds) if j != fold_index for t in fold]
        fold_config = replace(config, seed=config.seed + fold_index)
        if source_bytes is None:
            fold_corpus = _corpus_from_turns(train_turns, corpus.label_set)
            model = build_model(
                fold_config, corpus.label_set, embeddings.dimension, fold_corpus, word_vectors
            )
            model_train_examples = examples_for_model(train_turns, model, embeddings)
            train_on_examples(model, model_train_examples, fold_config)
        else:
            model = load_checkpoint_bytes(source_bytes)
            finetune(model, _corpus_from_turns(train_turns, corpus.label_set), fold_config, embeddings)
        result = evaluate_examples(model, examples_for_model(test_turns, model, embeddings))
        accuracies.append(result.accuracy)
        confusion = result.confusion
        correct_total += result.correct
        count_total += result.total
    return RunResult.from_accuracies(
        accuracies, confusion, pooled_accuracy=correct_total / count_total
    )


def _corpus_from_turns(turns: list[Turn], label_set: LabelSet) -> Corpus:
    """Wrap an arbitrary turn subset for APIs that take a Corpus.

    Turn indices inside these ad-hoc groups are not consecutive, so the
    dialogues skip validation; context lookups go through the embedding
    table by key and do not care.
    """
    from ..corpus.types import Dialogue

    by_dialogue: dict[str, list[Turn]] = {}
    for turn in turns:
        by_dialogue.setdefault(turn.dialogue_id, []).append(turn)
    dialogues = [Dialogue(d, sorted(ts, key=lambda t: t.turn_index)) for d, ts in by_dialogue.items()]
    return Corpus(dialogues, label_set)


@dataclass
class ExperimentReport:
    """One suite outcome: a RunResult per requested condition.

    Wall-clock seconds are kept for operator feedback but never serialized;
    emitted reports must be byte-identical for a fixed seed.
    """

    config: dict
    labels: list[str]
    conditions: dict[str, RunResult] = field(default_factory=dict)
    condition_meta: dict[str, dict] = field(default_factory=dict)
    wall_clock: dict[str, float] = field(default_factory=dict)


def run_condition_suite(
    target_train: Corpus,
    target_test: Corpus,
    embeddings: SentenceEmbeddingTable,
    conditions: list[str],
    finetune_cfg: TrainConfig,
    source_model: Classifier | None = None,
    scratch_cfg: TrainConfig | None = None,
    runs: int = DEFAULT_RUNS,
    seed: int = 0,
    word_vectors: WordVectorTable | None = None,
) -> ExperimentReport:
    """Run the requested baseline/transfer conditions under repeated seeds."""
    for condition in conditions:
        if condition not in CONDITIONS:
            raise ConfigurationError(f"unknown condition {condition!r}")
    transfer_requested = {"no_finetune", "finetune"} & set(conditions)
    if transfer_requested and source_model is None:
        raise ConfigurationError(
            f"conditions {sorted(transfer_requested)} need a source model checkpoint"
        )
    if len(target_train) == 0 or len(target_test) == 0:
        raise ConfigurationError("suite needs non-empty target train and test corpora")
    if scratch_cfg is None:
        scratch_cfg = replace(finetune_cfg, freeze_policy="all")

    label_set = target_train.label_set
    test_turns = target_test.turns()
    for turn in test_turns:
        label_set.index(turn.label)  # unknown test tags fail fast
    source_bytes = save_checkpoint_bytes(source_model) if source_model is not None else None

    report = ExperimentReport(
        config={
            "runs": runs,
            "seed": seed,
            "conditions": list(conditions),
            "model": finetune_cfg.model,
            "target_train_size": len(target_train),
            "target_test_size": len(target_test),
        },
        labels=label_set.tags,
    )

    for condition in conditions:
        started = time.perf_counter()
        if condition == "majority":
            def run_majority(_seed: int):
                baseline = majority_class_baseline(target_train.turns(), test_turns, label_set)
                return baseline.accuracy, baseline.confusion

            result = run_repeated(run_majority, runs, seed)
            meta = {"epochs": None, "learning_rate": None}
        elif condition == "scratch":
            def run_scratch(run_seed: int):
                cfg = replace(scratch_cfg, seed=run_seed)
                model = build_model(cfg, label_set, embeddings.dimension, target_train, word_vectors)
                train_on_examples(
                    model, examples_for_model(target_train.turns(), model, embeddings), cfg
                )
                outcome = evaluate_examples(
                    model, examples_for_model(test_turns, model, embeddings)
                )
                return outcome.accuracy, outcome.confusion

            result = run_repeated(run_scratch, runs, seed)
            meta = {"epochs": scratch_cfg.epochs, "learning_rate": scratch_cfg.learning_rate}
        elif condition == "no_finetune":
            source = load_checkpoint_bytes(source_bytes)
            source_examples = examples_for_model(
                test_turns, source, embeddings, label_set=label_set
            )

            def run_no_finetune(_seed: int):
                outcome = evaluate_with_label_map(source, source_examples, label_set)
                return outcome.accuracy, outcome.confusion

            result = run_repeated(run_no_finetune, runs, seed)
            meta = {"epochs": None, "learning_rate": None}
        else:  # finetune
            def run_finetune(run_seed: int):
                model = load_checkpoint_bytes(source_bytes)
                cfg = replace(finetune_cfg, seed=run_seed)
                finetune(model, target_train, cfg, embeddings)
                outcome = evaluate_examples(
                    model, examples_for_model(test_turns, model, embeddings)
                )
                return outcome.accuracy, outcome.confusion

            result = run_repeated(run_finetune, runs, seed)
            meta = {"epochs": finetune_cfg.epochs, "learning_rate": finetune_cfg.learning_rate}
        report.conditions[condition] = result
        report.condition_meta[condition] = meta
        report.wall_clock[condition] = time.perf_counter() - started
    return report
