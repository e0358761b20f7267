"""Classifier forwards against hand computations, invariances, head swaps."""

import numpy as np
import pytest

from dialact.corpus import LabelSet, PAD_ID, Vocabulary, encode_turn_tokens
from dialact.errors import ConfigurationError, DimensionError, VocabularyError
from dialact.models import (
    CnnClassifier,
    MhSattClassifier,
    MlpClassifier,
    predict,
    replace_head,
)

LABELS3 = LabelSet(["A", "B", "C"])


def softmax_np(z):
    e = np.exp(z - z.max())
    return e / e.sum()


class TestMlpForward:
    def test_all_zero_parameters_give_zero_logits(self):
        model = MlpClassifier(embedding_dim=4, label_set=LABELS3, seed=0, hidden=5)
        for name in model.store.names():
            model.store[name].data[:] = 0.0
        logits = model.forward(np.zeros(4), np.zeros(4))
        assert np.array_equal(logits.data, np.zeros(3, dtype=np.float32))

    def test_inference_is_deterministic(self):
        model = MlpClassifier(embedding_dim=6, label_set=LABELS3, seed=3, hidden=4)
        rng = np.random.default_rng(0)
        prev, cur = rng.normal(size=6).astype(np.float32), rng.normal(size=6).astype(np.float32)
        a = model.forward(prev, cur).data
        b = model.forward(prev, cur).data
        assert np.array_equal(a, b)

    def test_hand_computed_two_layer_toy(self):
        # oracle: relu(W1 @ [prev;cur] + b1) through the head, in raw numpy
        model = MlpClassifier(embedding_dim=1, label_set=LabelSet(["N", "P"]), seed=0, hidden=2)
        w1 = np.array([[1.0, -1.0], [0.5, 2.0]], dtype=np.float32)
        b1 = np.array([0.1, -0.2], dtype=np.float32)
        w2 = np.array([[2.0, 0.0], [-1.0, 1.0]], dtype=np.float32)
        b2 = np.array([0.0, 0.3], dtype=np.float32)
        model.store["hidden.W"].data[:] = w1
        model.store["hidden.b"].data[:] = b1
        model.store["head.W"].data[:] = w2
        model.store["head.b"].data[:] = b2
        prev, cur = np.array([0.5], dtype=np.float32), np.array([-0.25], dtype=np.float32)
        expected = w2 @ np.maximum(w1 @ np.array([0.5, -0.25], dtype=np.float32) + b1, 0) + b2
        assert np.allclose(model.forward(prev, cur).data, expected, atol=1e-6)

    def test_width_mismatch(self):
        model = MlpClassifier(embedding_dim=4, label_set=LABELS3, seed=0, hidden=3)
        with pytest.raises(DimensionError):
            model.forward(np.zeros(5), np.zeros(4))

    def test_same_seed_same_parameters(self):
        a = MlpClassifier(embedding_dim=8, label_set=LABELS3, seed=21, hidden=6)
        b = MlpClassifier(embedding_dim=8, label_set=LABELS3, seed=21, hidden=6)
        assert a.store.checksum() == b.store.checksum()


class TestCnnForward:
    def make_model(self, **kwargs):
        vocab = Vocabulary([f"w{i}" for i in range(30)])
        defaults = dict(
            vocab=vocab,
            embedding_dim=4,
            label_set=LABELS3,
            seed=1,
            d_word=6,
            filters=5,
            kernel_width=3,
        )
        defaults.update(kwargs)
        return CnnClassifier(**defaults), vocab

    def test_all_pad_window_pools_relu_of_bias(self):
        model, _ = self.make_model()
        bias = np.array([0.5, -0.3, 0.0, 1.2, -2.0], dtype=np.float32)
        model.store["conv.b"].data[:] = bias
        prev = np.zeros(4, dtype=np.float32)
        logits = model.forward([PAD_ID] * 15, prev).data
        # oracle: features = [max(0, bias), prev] through the head
        features = np.concatenate([np.maximum(bias, 0.0), prev])
        expected = model.store["head.W"].data @ features + model.store["head.b"].data
        assert np.allclose(logits, expected, atol=1e-6)

    def test_blind_to_truncated_positions(self):
        model, vocab = self.make_model()
        words = [f"w{i}" for i in range(20)]
        mutated = list(words)
        mutated[13] = "w25"  # inside the dropped 14th..18th positions
        ids_a = encode_turn_tokens(" ".join(words), vocab)
        ids_b = encode_turn_tokens(" ".join(mutated), vocab)
        assert ids_a == ids_b
        prev = np.random.default_rng(2).normal(size=4).astype(np.float32)
        assert np.array_equal(model.forward(ids_a, prev).data, model.forward(ids_b, prev).data)

    def test_hand_computed_single_filter_width_one(self):
        # identity embeddings, one width-1 filter: pooled value = max over
        # positions of kernel . embedding(token)
        vocab = Vocabulary(["x", "y"])  # ids 2 and 3
        model = CnnClassifier(
            vocab=vocab,
            embedding_dim=1,
            label_set=LabelSet(["N", "P"]),
            seed=0,
            d_word=4,
            filters=1,
            kernel_width=1,
            window=3,
        )
        emb = np.zeros((4, 4), dtype=np.float32)
        emb[2, 0] = 1.0  # token "x" -> e0
        emb[3, 1] = 1.0  # token "y" -> e1
        model.store["embedding"].data[:] = emb
        kernel = np.array([[[2.0, -3.0, 0.0, 0.0]]], dtype=np.float32)
        model.store["conv.K"].data[:] = kernel
        model.store["conv.b"].data[:] = np.array([0.25], dtype=np.float32)
        prev = np.array([0.7], dtype=np.float32)
        ids = [vocab.id("x"), vocab.id("y"), PAD_ID]
        # per-position responses: x -> 2+0.25, y -> -3+0.25, pad -> 0.25
        pooled = max(2.25, 0.0, 0.25)  # after relu
        features = np.array([pooled, 0.7], dtype=np.float32)
        expected = model.store["head.W"].data @ features + model.store["head.b"].data
        assert np.allclose(model.forward(ids, prev).data, expected, atol=1e-6)

    def test_out_of_range_token_id(self):
        model, _ = self.make_model()
        with pytest.raises(VocabularyError):
            model.forward([999] + [PAD_ID] * 14, np.zeros(4))

    def test_pretrained_vectors_copied(self):
        from dialact.corpus import WordVectorTable

        table = WordVectorTable(6)
        table.put("w3", np.arange(6, dtype=np.float32))
        model, vocab = self.make_model(word_vectors=table)
        row = model.store["embedding"].data[vocab.id("w3")]
        assert np.array_equal(row, np.arange(6, dtype=np.float32))
        assert np.array_equal(model.store["embedding"].data[PAD_ID], np.zeros(6))


class TestMhSattForward:
    def make_model(self, **kwargs):
        vocab = Vocabulary(
            [f"en:w{i}" for i in range(12)] + [f"xx:v{i}" for i in range(12)]
        )
        defaults = dict(
            vocab=vocab,
            embedding_dim=3,
            label_set=LABELS3,
            seed=5,
            d_model=8,
            heads=2,
            stacked=True,
        )
        defaults.update(kwargs)
        return MhSattClassifier(**defaults), vocab

    def test_permuting_real_tokens_keeps_logits(self):
        model, vocab = self.make_model()
        rng = np.random.default_rng(8)
        translated = [vocab.id(f"en:w{i}") for i in range(6)] + [PAD_ID] * 9
        original = [vocab.id(f"xx:v{i}") for i in range(4)] + [PAD_ID] * 11
        prev = rng.normal(size=3).astype(np.float32)
        base = model.forward(translated, original, prev).data

        real = [i for i in translated + original if i != PAD_ID]
        for _ in range(4):
            perm = list(rng.permutation(len(real)))
            shuffled = [real[p] for p in perm]
            new_translated = shuffled[:6] + [PAD_ID] * 9
            new_original = shuffled[6:] + [PAD_ID] * 11
            moved = model.forward(new_translated, new_original, prev).data
            assert np.allclose(base, moved, atol=1e-6)

    def test_all_pad_original_equals_mono_forward(self):
        model, vocab = self.make_model()
        translated = [vocab.id(f"en:w{i}") for i in range(5)] + [PAD_ID] * 10
        prev = np.random.default_rng(3).normal(size=3).astype(np.float32)
        stacked = model.forward(translated, [PAD_ID] * 15, prev).data
        mono = model.forward(translated, None, prev).data
        assert np.array_equal(stacked, mono)

    def test_hand_computed_single_token_single_head(self):
        # one real token, one head: attention weight is 1, so the turn
        # embedding is x @ Wv @ Wo
        vocab = Vocabulary(["en:solo"])
        model = MhSattClassifier(
            vocab=vocab,
            embedding_dim=2,
            label_set=LabelSet(["N", "P"]),
            seed=0,
            d_model=3,
            heads=1,
            window=4,
            stacked=False,
        )
        rng = np.random.default_rng(4)
        for name in ("attn.W_q", "attn.W_k", "attn.W_v", "attn.W_o"):
            model.store[name].data[:] = rng.normal(size=(3, 3)).astype(np.float32)
        x = rng.normal(size=3).astype(np.float32)
        model.store["embedding"].data[vocab.id("en:solo")] = x
        prev = np.array([0.5, -1.0], dtype=np.float32)
        turn = x @ model.store["attn.W_v"].data @ model.store["attn.W_o"].data
        features = np.concatenate([turn, prev])
        expected = model.store["head.W"].data @ features + model.store["head.b"].data
        ids = [vocab.id("en:solo"), PAD_ID, PAD_ID, PAD_ID]
        assert np.allclose(model.forward(ids, None, prev).data, expected, atol=1e-5)

    def test_fully_padded_input_gives_zero_turn_embedding(self):
        model, _ = self.make_model()
        prev = np.zeros(3, dtype=np.float32)
        logits = model.forward([PAD_ID] * 15, [PAD_ID] * 15, prev).data
        expected = model.store["head.b"].data  # zero features through the head
        assert np.allclose(logits, expected)


class TestPredict:
    def test_argmax(self):
        assert predict(np.array([0.1, 2.0, -1.0])) == 1

    def test_tie_breaks_low_index(self):
        assert predict(np.array([3.0, 3.0])) == 0

    def test_shift_invariance(self):
        logits = np.array([0.4, -0.2, 1.7])
        assert predict(logits) == predict(logits + 100.0)


class TestReplaceHead:
    def test_17_to_16_keeps_body_bits(self):
        en_labels = LabelSet([f"EN{i}" for i in range(17)])
        de_labels = LabelSet([f"DE{i}" for i in range(16)])
        model = MlpClassifier(embedding_dim=8, label_set=en_labels, seed=2, hidden=6)
        body_before = model.body_checksum()
        replace_head(model, de_labels, seed=9)
        assert model.store["head.W"].shape == (16, 6)
        assert model.body_checksum() == body_before
        assert model.label_set == de_labels

    def test_same_size_still_reinitializes(self):
        model = MlpClassifier(embedding_dim=4, label_set=LABELS3, seed=1, hidden=5)
        old = model.store["head.W"].data.copy()
        replace_head(model, LabelSet(["X", "Y", "Z"]), seed=123)
        assert not np.array_equal(model.store["head.W"].data, old)

    def test_same_seed_gives_identical_heads(self):
        a = MlpClassifier(embedding_dim=4, label_set=LABELS3, seed=1, hidden=5)
        b = MlpClassifier(embedding_dim=4, label_set=LABELS3, seed=1, hidden=5)
        replace_head(a, LabelSet(["P", "Q"]), seed=7)
        replace_head(b, LabelSet(["P", "Q"]), seed=7)
        assert np.array_equal(a.store["head.W"].data, b.store["head.W"].data)

    def test_empty_label_set_rejected(self):
        model = MlpClassifier(embedding_dim=4, label_set=LABELS3, seed=1, hidden=5)
        with pytest.raises(ConfigurationError):
            replace_head(model, LabelSet([]), seed=0)
