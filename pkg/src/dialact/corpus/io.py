"""File formats: corpus lines, sentence-embedding tables, word-vector tables.

Corpus file: UTF-8, one turn per line, tab-separated
    dialogue_id <TAB> turn_index <TAB> speaker <TAB> label <TAB> text_original <TAB> text_translated
with an empty last field for untranslated turns; lines starting with '#' are
comments and blank lines are skipped.

Sentence-embedding file: first line "dim=<D>", then one row per turn:
    dialogue_id turn_index v1 ... vD
(whitespace separated; keys therefore cannot contain whitespace).

Word-vector file: first line "count dim", then "word v1 ... v_dim" rows.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from ..errors import LabelError, MissingEmbeddingError, ParseError
from .types import Corpus, Dialogue, LabelSet, Turn

log = logging.getLogger(__name__)

CORPUS_FIELDS = 6


def load_corpus(path: str | Path, label_set: LabelSet | None = None) -> Corpus:
    """Parse a corpus file; turns are grouped by dialogue and ordered by index.

    With a declared label set, every turn's label must belong to it; without
    one the label set is inferred in first-occurrence order.
    """
    turns_by_dialogue: dict[str, list[Turn]] = {}
    inferred: list[str] = []
    seen_tags: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != CORPUS_FIELDS:
                raise ParseError(
                    f"{path}:{line_no}: expected {CORPUS_FIELDS} tab-separated fields, got {len(fields)}"
                )
            dialogue_id, index_text, speaker, label, original, translated = fields
            try:
                turn_index = int(index_text)
            except ValueError:
                raise ParseError(f"{path}:{line_no}: turn_index {index_text!r} is not an integer") from None
            if turn_index < 0:
                raise ParseError(f"{path}:{line_no}: turn_index must be non-negative")
            if label_set is not None and label not in label_set:
                raise LabelError(f"{path}:{line_no}: label {label!r} not in the declared label set")
            if label not in seen_tags:
                seen_tags.add(label)
                inferred.append(label)
            turns_by_dialogue.setdefault(dialogue_id, []).append(
                Turn(
                    dialogue_id=dialogue_id,
                    turn_index=turn_index,
                    speaker=speaker,
                    label=label,
                    text_original=original,
                    text_translated=translated or None,
                )
            )
    dialogues = []
    for dialogue_id, turns in turns_by_dialogue.items():
        dialogue = Dialogue(dialogue_id, sorted(turns, key=lambda t: t.turn_index))
        dialogue.validate()
        dialogues.append(dialogue)
    return Corpus(dialogues, label_set if label_set is not None else LabelSet(inferred))


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for dialogue in corpus.dialogues:
            for turn in dialogue.turns:
                handle.write(
                    "\t".join(
                        [
                            turn.dialogue_id,
                            str(turn.turn_index),
                            turn.speaker,
                            turn.label,
                            turn.text_original,
                            turn.text_translated or "",
                        ]
                    )
                    + "\n"
                )


class SentenceEmbeddingTable:
    """(dialogue_id, turn_index) -> fixed-width sentence vector."""

    def __init__(self, dimension: int):
        if dimension < 1:
            raise ParseError(f"embedding dimension must be positive, got {dimension}")
        self.dimension = dimension
        self._vectors: dict[tuple[str, int], np.ndarray] = {}
        self.duplicate_count = 0

    def put(self, dialogue_id: str, turn_index: int, vector: np.ndarray) -> None:
        vector = np.asarray(vector, dtype=np.float32)
        if vector.shape != (self.dimension,):
            raise ParseError(
                f"embedding for ({dialogue_id}, {turn_index}) has {vector.shape[0]} values, "
                f"expected {self.dimension}"
            )
        key = (dialogue_id, turn_index)
        if key in self._vectors:
            self.duplicate_count += 1
        self._vectors[key] = vector

    def get(self, dialogue_id: str, turn_index: int) -> np.ndarray:
        try:
            return self._vectors[(dialogue_id, turn_index)]
        except KeyError:
            raise MissingEmbeddingError(
                f"no sentence embedding stored for turn ({dialogue_id}, {turn_index})"
            ) from None

    def __contains__(self, key: tuple[str, int]) -> bool:
        return key in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def items(self):
        return self._vectors.items()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SentenceEmbeddingTable):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self._vectors.keys() == other._vectors.keys()
            and all(np.array_equal(v, other._vectors[k]) for k, v in self._vectors.items())
        )


def load_sentence_embeddings(path: str | Path) -> SentenceEmbeddingTable:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip()
        if not header.startswith("dim="):
            raise ParseError(f"{path}: first line must be 'dim=<D>', got {header!r}")
        try:
            dimension = int(header[len("dim=") :])
        except ValueError:
            raise ParseError(f"{path}: bad dimension in header {header!r}") from None
        table = SentenceEmbeddingTable(dimension)
        for line_no, raw in enumerate(handle, start=2):
            if not raw.strip():
                continue
            parts = raw.split()
            if len(parts) < 2:
                raise ParseError(f"{path}:{line_no}: expected 'dialogue_id turn_index v1 ...'")
            dialogue_id = parts[0]
            try:
                turn_index = int(parts[1])
            except ValueError:
                raise ParseError(f"{path}:{line_no}: turn_index {parts[1]!r} is not an integer") from None
            values = parts[2:]
            if len(values) != dimension:
                raise ParseError(
                    f"{path}:{line_no}: row ({dialogue_id}, {turn_index}) has {len(values)} values, "
                    f"expected {dimension}"
                )
            table.put(dialogue_id, turn_index, np.array([float(v) for v in values], dtype=np.float32))
    if table.duplicate_count:
        log.warning("%s: %d duplicate embedding keys (last occurrence wins)", path, table.duplicate_count)
    return table


def write_sentence_embeddings(table: SentenceEmbeddingTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"dim={table.dimension}\n")
        for (dialogue_id, turn_index), vector in table.items():
            values = " ".join(repr(float(v)) for v in vector)
            handle.write(f"{dialogue_id}\t{turn_index}\t{values}\n")


class WordVectorTable:
    """word -> fixed-width vector (the standard text word2vec layout)."""

    def __init__(self, dimension: int):
        self.dimension = dimension
        self._vectors: dict[str, np.ndarray] = {}

    def put(self, word: str, vector: np.ndarray) -> None:
        vector = np.asarray(vector, dtype=np.float32)
        if vector.shape != (self.dimension,):
            raise ParseError(
                f"word vector for {word!r} has {vector.shape[0]} values, expected {self.dimension}"
            )
        self._vectors[word] = vector

    def get(self, word: str) -> np.ndarray | None:
        return self._vectors.get(word)

    def __contains__(self, word: str) -> bool:
        return word in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def items(self):
        return self._vectors.items()

    def __eq__(self, other) -> bool:
        if not isinstance(other, WordVectorTable):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self._vectors.keys() == other._vectors.keys()
            and all(np.array_equal(v, other._vectors[k]) for k, v in self._vectors.items())
        )


def load_word_vectors(path: str | Path) -> WordVectorTable:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().split()
        if len(header) != 2:
            raise ParseError(f"{path}: first line must be 'count dim'")
        try:
            count, dimension = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError(f"{path}: bad 'count dim' header") from None
        table = WordVectorTable(dimension)
        rows = 0
        for line_no, raw in enumerate(handle, start=2):
            if not raw.strip():
                continue
            parts = raw.split()
            word, values = parts[0], parts[1:]
            if len(values) != dimension:
                raise ParseError(
                    f"{path}:{line_no}: word {word!r} has {len(values)} values, expected {dimension}"
                )
            if word in table:
                raise ParseError(f"{path}:{line_no}: duplicate word {word!r}")
            table.put(word, np.array([float(v) for v in values], dtype=np.float32))
            rows += 1
    if rows != count:
        raise ParseError(f"{path}: header declares {count} entries but file has {rows}")
    return table


def write_word_vectors(table: WordVectorTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{len(table)} {table.dimension}\n")
        for word, vector in table.items():
            values = " ".join(repr(float(v)) for v in vector)
            handle.write(f"{word} {values}\n")


def pair_with_previous(turn: Turn, embeddings: SentenceEmbeddingTable) -> np.ndarray:
    """Sentence vector of the turn before this one; zeros for dialogue openers."""
    if turn.turn_index == 0:
        return np.zeros(embeddings.dimension, dtype=np.float32)
    return embeddings.get(turn.dialogue_id, turn.turn_index - 1)
