"""Training loops: overfit capacity, loss bookkeeping, freezing, determinism."""

import math

import numpy as np
import pytest

from dialact.corpus import Corpus, LabelSet, SentenceEmbeddingTable
from dialact.errors import ConfigurationError, MissingEmbeddingError
from dialact.models import replace_head
from dialact.pipeline import (
    TrainConfig,
    evaluate_accuracy,
    examples_for_model,
    finetune,
    train_initial,
)
from synth import four_class_task


def small_config(**overrides):
    defaults = dict(model="mlp", epochs=40, hidden=16, batch_size=16, seed=0)
    defaults.update(overrides)
    return TrainConfig(**defaults)


class TestTrainInitial:
    def test_separable_task_reaches_high_training_accuracy(self):
        corpus, table = four_class_task(seed=3)
        run = train_initial(corpus, small_config(), table)
        result = evaluate_accuracy(run.model, corpus.turns(), table)
        assert result.accuracy >= 0.99

    def test_first_epoch_loss_near_log_k(self):
        corpus, table = four_class_task(seed=4)
        run = train_initial(corpus, small_config(epochs=1), table)
        assert abs(run.epoch_losses[0] - math.log(4)) < 0.1 * math.log(4)

    def test_same_seed_identical_loss_curves_and_parameters(self):
        corpus, table = four_class_task(seed=5)
        run_a = train_initial(corpus, small_config(epochs=5, seed=9), table)
        run_b = train_initial(corpus, small_config(epochs=5, seed=9), table)
        assert run_a.epoch_losses == run_b.epoch_losses
        assert run_a.model.store.checksum() == run_b.model.store.checksum()

    def test_different_seed_changes_curve(self):
        corpus, table = four_class_task(seed=5)
        run_a = train_initial(corpus, small_config(epochs=3, seed=1), table)
        run_b = train_initial(corpus, small_config(epochs=3, seed=2), table)
        assert run_a.epoch_losses != run_b.epoch_losses

    def test_empty_corpus_rejected(self):
        table = SentenceEmbeddingTable(8)
        with pytest.raises(ConfigurationError):
            train_initial(Corpus([], LabelSet(["A"])), small_config(), table)

    def test_missing_embedding_names_turn(self):
        corpus, table = four_class_task(seed=6, n_turns=10)
        sparse = SentenceEmbeddingTable(table.dimension)
        items = list(table.items())
        for key, vec in items[:-1]:
            sparse.put(key[0], key[1], vec)
        with pytest.raises(MissingEmbeddingError):
            train_initial(corpus, small_config(epochs=1), sparse)

    @pytest.mark.parametrize("kind", ["cnn", "mhsatt"])
    def test_token_models_learn_keyword_task(self, kind):
        corpus, table = four_class_task(seed=7)
        config = small_config(
            model=kind, epochs=25, filters=16, d_word=16, d_model=16, heads=2, stacked=(kind == "mhsatt")
        )
        run = train_initial(corpus, config, table)
        result = evaluate_accuracy(run.model, corpus.turns(), table)
        assert result.accuracy >= 0.99


class TestFinetune:
    def make_source(self):
        corpus, table = four_class_task(seed=8)
        run = train_initial(corpus, small_config(epochs=10), table)
        return run.model, table

    def target_corpus(self, seed=9):
        corpus, table = four_class_task(seed=seed, n_turns=30)
        relabeled = Corpus(corpus.dialogues, corpus.label_set)
        return relabeled, table

    def test_head_only_freeze_keeps_body_bits(self):
        model, _ = self.make_source()
        target, target_table = self.target_corpus()
        body_before = model.body_checksum()
        head_before = model.store.checksum(model.head_names())
        finetune(model, target, small_config(epochs=8, freeze_policy="head_only"), target_table)
        assert model.body_checksum() == body_before
        assert model.store.checksum(model.head_names()) != head_before

    def test_full_finetune_moves_body(self):
        model, _ = self.make_source()
        target, target_table = self.target_corpus()
        body_before = model.body_checksum()
        finetune(model, target, small_config(epochs=3, freeze_policy="all"), target_table)
        assert model.body_checksum() != body_before

    def test_head_matches_new_label_set(self):
        model, _ = self.make_source()
        target, target_table = self.target_corpus()
        two_label_turns = [t for t in target.turns() if t.label in ("C0", "C1")]
        from dialact.pipeline.experiments import _corpus_from_turns

        narrowed = _corpus_from_turns(two_label_turns, LabelSet(["C0", "C1"]))
        finetune(model, narrowed, small_config(epochs=2), target_table)
        assert model.store["head.W"].shape[0] == 2
        assert model.label_set.tags == ["C0", "C1"]

    def test_empty_target_rejected(self):
        model, table = self.make_source()
        with pytest.raises(ConfigurationError):
            finetune(model, Corpus([], LabelSet(["A"])), small_config(), table)

    def test_model_kind_mismatch_rejected(self):
        model, table = self.make_source()
        target, target_table = self.target_corpus()
        with pytest.raises(ConfigurationError):
            finetune(model, target, small_config(model="cnn", filters=4), target_table)

    def test_finetune_deterministic_per_seed(self):
        target, target_table = self.target_corpus()
        checks = []
        for _ in range(2):
            model, _ = self.make_source()
            finetune(model, target, small_config(epochs=4, seed=33), target_table)
            checks.append(model.store.checksum())
        assert checks[0] == checks[1]


class TestReplaceHeadInPipeline:
    def test_replace_then_forward_width(self):
        corpus, table = four_class_task(seed=10, n_turns=20)
        run = train_initial(corpus, small_config(epochs=2), table)
        replace_head(run.model, LabelSet(["X", "Y", "Z", "W", "V", "U"]), seed=1)
        example = examples_for_model(corpus.turns()[:1], run.model, table, label_set=corpus.label_set)[0]
        logits = run.model.forward(example.prev, example.cur)
        assert logits.shape == (6,)
