"""Corpus, embedding, and word-vector file loaders plus their writers."""

import numpy as np
import pytest

from dialact.corpus import (
    Corpus,
    LabelSet,
    SentenceEmbeddingTable,
    Turn,
    WordVectorTable,
    load_corpus,
    load_sentence_embeddings,
    load_word_vectors,
    pair_with_previous,
    write_corpus,
    write_sentence_embeddings,
    write_word_vectors,
)
from dialact.errors import (
    LabelError,
    MissingEmbeddingError,
    ParseError,
    StructureError,
)


def corpus_file(tmp_path, text, name="corpus.tsv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCorpus:
    def test_minimal_two_turn_dialogue(self, tmp_path):
        path = corpus_file(tmp_path, "d1\t0\tA\tGREET\thello there\t\nd1\t1\tB\tBYE\tsee you\t\n")
        corpus = load_corpus(path, LabelSet(["GREET", "BYE"]))
        assert len(corpus.dialogues) == 1
        assert len(corpus) == 2
        assert corpus.dialogues[0].turns[0].text_original == "hello there"
        assert corpus.dialogues[0].turns[0].text_translated is None

    def test_empty_file_is_empty_corpus(self, tmp_path):
        corpus = load_corpus(corpus_file(tmp_path, ""))
        assert corpus.dialogues == []
        assert len(corpus) == 0

    def test_unknown_label_names_label_and_line(self, tmp_path):
        path = corpus_file(tmp_path, "d1\t0\tA\tGREET\thi\t\nd1\t1\tA\tWAVE\tbye\t\n")
        with pytest.raises(LabelError, match=r"2.*'WAVE'|'WAVE'.*2"):
            load_corpus(path, LabelSet(["GREET"]))

    def test_comments_and_blank_lines_ignored(self, tmp_path):
        path = corpus_file(tmp_path, "# a comment\n\nd1\t0\tA\tX\they\t\n")
        assert len(load_corpus(path)) == 1

    def test_malformed_line_reports_number(self, tmp_path):
        path = corpus_file(tmp_path, "d1\t0\tA\tX\they\t\nd1\t1\tonly three\tfields\n")
        with pytest.raises(ParseError, match="2"):
            load_corpus(path)

    def test_non_consecutive_turn_index(self, tmp_path):
        path = corpus_file(tmp_path, "d1\t0\tA\tX\they\t\nd1\t2\tA\tX\tyo\t\n")
        with pytest.raises(StructureError):
            load_corpus(path)

    def test_turns_reordered_by_index(self, tmp_path):
        path = corpus_file(tmp_path, "d1\t1\tB\tX\tsecond\t\nd1\t0\tA\tX\tfirst\t\n")
        corpus = load_corpus(path)
        assert [t.text_original for t in corpus.dialogues[0].turns] == ["first", "second"]

    def test_inferred_labels_first_occurrence_order(self, tmp_path):
        path = corpus_file(tmp_path, "d1\t0\tA\tB_TAG\tx\t\nd1\t1\tA\tA_TAG\ty\t\nd1\t2\tA\tB_TAG\tz\t\n")
        assert load_corpus(path).label_set.tags == ["B_TAG", "A_TAG"]

    def test_round_trip(self, tmp_path):
        original = Corpus(
            dialogues=[],
            label_set=LabelSet(["X", "Y"]),
        )
        path = corpus_file(
            tmp_path, "d1\t0\tA\tX\thello world\tbonjour monde\nd2\t0\tB\tY\tok\t\n"
        )
        corpus = load_corpus(path)
        out = tmp_path / "copy.tsv"
        write_corpus(corpus, out)
        again = load_corpus(out)
        assert again.turns() == corpus.turns()
        assert again.label_set == corpus.label_set
        assert original.turns() == []


class TestSentenceEmbeddings:
    def test_documented_example_row(self, tmp_path):
        path = corpus_file(tmp_path, "dim=4\nd1 0 1.0 2.0 3.0 4.0\n", "emb.tsv")
        table = load_sentence_embeddings(path)
        assert table.dimension == 4
        assert np.allclose(table.get("d1", 0), [1.0, 2.0, 3.0, 4.0])

    def test_header_only(self, tmp_path):
        table = load_sentence_embeddings(corpus_file(tmp_path, "dim=7\n", "emb.tsv"))
        assert table.dimension == 7
        assert len(table) == 0

    def test_arity_mismatch_names_row_key(self, tmp_path):
        path = corpus_file(tmp_path, "dim=4\nd1 0 1.0 2.0 3.0\n", "emb.tsv")
        with pytest.raises(ParseError, match=r"d1.*0"):
            load_sentence_embeddings(path)

    def test_duplicates_last_wins_with_count(self, tmp_path):
        path = corpus_file(tmp_path, "dim=1\nd1 0 1.0\nd1 0 9.0\n", "emb.tsv")
        table = load_sentence_embeddings(path)
        assert table.duplicate_count == 1
        assert table.get("d1", 0)[0] == np.float32(9.0)

    def test_missing_header(self, tmp_path):
        with pytest.raises(ParseError, match="dim="):
            load_sentence_embeddings(corpus_file(tmp_path, "d1 0 1.0\n", "emb.tsv"))

    def test_round_trip_is_exact(self, tmp_path):
        table = SentenceEmbeddingTable(3)
        rng = np.random.default_rng(5)
        for i in range(10):
            table.put("dlg", i, rng.normal(size=3).astype(np.float32))
        out = tmp_path / "emb.tsv"
        write_sentence_embeddings(table, out)
        assert load_sentence_embeddings(out) == table


class TestWordVectors:
    def test_documented_example(self, tmp_path):
        path = corpus_file(tmp_path, "2 3\na 1 2 3\nb 0 0 1\n", "wv.txt")
        table = load_word_vectors(path)
        assert len(table) == 2
        assert np.allclose(table.get("a"), [1, 2, 3])
        assert np.allclose(table.get("b"), [0, 0, 1])

    def test_empty_table_keeps_dimension(self, tmp_path):
        table = load_word_vectors(corpus_file(tmp_path, "0 300\n", "wv.txt"))
        assert len(table) == 0
        assert table.dimension == 300

    def test_count_mismatch(self, tmp_path):
        with pytest.raises(ParseError, match="2"):
            load_word_vectors(corpus_file(tmp_path, "2 3\na 1 2 3\n", "wv.txt"))

    def test_arity_mismatch(self, tmp_path):
        with pytest.raises(ParseError, match="'a'"):
            load_word_vectors(corpus_file(tmp_path, "1 3\na 1 2\n", "wv.txt"))

    def test_round_trip_is_exact(self, tmp_path):
        table = WordVectorTable(4)
        rng = np.random.default_rng(6)
        for word in ["alpha", "beta", "gamma"]:
            table.put(word, rng.normal(size=4).astype(np.float32))
        out = tmp_path / "wv.txt"
        write_word_vectors(table, out)
        assert load_word_vectors(out) == table


class TestPairWithPrevious:
    def make_turn(self, index):
        return Turn("d1", index, "A", "X", "text")

    def test_first_turn_gets_zero_vector(self):
        table = SentenceEmbeddingTable(5)
        vec = pair_with_previous(self.make_turn(0), table)
        assert np.array_equal(vec, np.zeros(5, dtype=np.float32))

    def test_lookup_of_previous_index(self):
        table = SentenceEmbeddingTable(3)
        stored = np.array([1.0, 2.0, 3.0], dtype=np.float32)
        table.put("d1", 2, stored)
        assert np.array_equal(pair_with_previous(self.make_turn(3), table), stored)

    def test_missing_previous_embedding_names_turn(self):
        table = SentenceEmbeddingTable(3)
        with pytest.raises(MissingEmbeddingError, match=r"d1.*2"):
            pair_with_previous(self.make_turn(3), table)
