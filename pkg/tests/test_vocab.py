"""Tokenization, vocabulary order, and the fixed 15-token window."""

from hypothesis import given
from hypothesis import strategies as st

from dialact.corpus import (
    Corpus,
    Dialogue,
    LabelSet,
    PAD_ID,
    Turn,
    UNK_ID,
    Vocabulary,
    build_vocab,
    encode_turn_tokens,
)


def one_turn_corpus(original, translated=None):
    turn = Turn("d", 0, "A", "X", original, translated)
    return Corpus([Dialogue("d", [turn])], LabelSet(["X"]))


class TestVocabulary:
    def test_reserved_ids_and_first_occurrence_order(self):
        corpus = one_turn_corpus("a b a")
        vocab = build_vocab(corpus)
        assert vocab.id("a") == 2
        assert vocab.id("b") == 3
        assert len(vocab) == 4
        assert vocab.tokens()[:2] == ["<pad>", "<unk>"]

    def test_bilingual_prefixes_keep_streams_apart(self):
        corpus = one_turn_corpus("bonjour", "hello")
        vocab = build_vocab(corpus, bilingual=True)
        assert "en:hello" in vocab
        assert "xx:bonjour" in vocab
        assert "hello" not in vocab

    def test_empty_corpus_is_reserved_only(self):
        vocab = build_vocab(Corpus([], LabelSet(["X"])))
        assert vocab.tokens() == ["<pad>", "<unk>"]

    def test_min_count_filters(self):
        corpus = one_turn_corpus("rare common common")
        vocab = build_vocab(corpus, min_count=2)
        assert "common" in vocab
        assert "rare" not in vocab

    def test_unknown_maps_to_unk(self):
        vocab = Vocabulary(["known"])
        assert vocab.id("unknown-token") == UNK_ID


class TestEncodeWindow:
    def test_twenty_tokens_keep_first_13_and_last_2(self):
        words = [f"w{i}" for i in range(1, 21)]
        vocab = Vocabulary(words)
        ids = encode_turn_tokens(" ".join(words), vocab)
        expected = [vocab.id(w) for w in words[:13] + words[18:]]
        assert ids == expected
        assert len(ids) == 15

    def test_exactly_fifteen_unchanged(self):
        words = [f"t{i}" for i in range(15)]
        vocab = Vocabulary(words)
        assert encode_turn_tokens(" ".join(words), vocab) == [vocab.id(w) for w in words]

    def test_short_text_right_padded(self):
        vocab = Vocabulary(["a", "b", "c"])
        ids = encode_turn_tokens("a b c", vocab)
        assert ids[:3] == [vocab.id("a"), vocab.id("b"), vocab.id("c")]
        assert ids[3:] == [PAD_ID] * 12

    def test_empty_text_is_all_pad(self):
        assert encode_turn_tokens("", Vocabulary()) == [PAD_ID] * 15

    def test_lowercasing(self):
        vocab = Vocabulary(["hello"])
        assert encode_turn_tokens("HELLO", vocab)[0] == vocab.id("hello")

    @given(st.lists(st.sampled_from(["aa", "bb", "cc", "dd"]), max_size=40))
    def test_window_always_fifteen_and_tail_preserved(self, words):
        vocab = Vocabulary(["aa", "bb", "cc", "dd"])
        ids = encode_turn_tokens(" ".join(words), vocab)
        assert len(ids) == 15
        if len(words) >= 2:
            tail = [vocab.id(words[-2]), vocab.id(words[-1])]
            kept = min(len(words), 15)
            assert ids[kept - 2 : kept] == tail
