"""Tokenization, vocabulary construction, and the fixed 15-token window."""

from __future__ import annotations

from typing import Iterable

from .types import Corpus

PAD = "<pad>"
UNK = "<unk>"
PAD_ID = 0
UNK_ID = 1

TRANSLATED_PREFIX = "en:"
ORIGINAL_PREFIX = "xx:"

WINDOW = 15
TAIL_KEEP = 2  # the last two source words always survive truncation


def tokenize(text: str) -> list[str]:
    """Lowercased whitespace tokenization."""
    return text.lower().split()


class Vocabulary:
    """Dense token -> id map with PAD=0 and UNK=1 reserved."""

    def __init__(self, tokens: Iterable[str] = ()):
        self._ids: dict[str, int] = {PAD: PAD_ID, UNK: UNK_ID}
        for token in tokens:
            self.add(token)

    def add(self, token: str) -> int:
        if token not in self._ids:
            self._ids[token] = len(self._ids)
        return self._ids[token]

    def id(self, token: str) -> int:
        return self._ids.get(token, UNK_ID)

    def __contains__(self, token: str) -> bool:
        return token in self._ids

    def __len__(self) -> int:
        return len(self._ids)

    def tokens(self) -> list[str]:
        """All tokens in id order, including PAD and UNK."""
        return list(self._ids)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._ids == other._ids

    @classmethod
    def from_id_ordered_tokens(cls, tokens: list[str]) -> "Vocabulary":
        if tokens[:2] != [PAD, UNK]:
            raise ValueError("token list must start with PAD and UNK")
        return cls(tokens[2:])


def build_vocab(
    corpus: Corpus,
    field: str = "classifier",
    min_count: int = 1,
    bilingual: bool = False,
) -> Vocabulary:
    """Vocabulary in first-occurrence order after the reserved ids.

    `field` selects which text feeds it: "classifier" (translated when
    present), "original", or "translated". Bilingual mode ignores `field`
    and interleaves both streams per turn, each token carrying its stream
    prefix ("en:" for the classifier text, "xx:" for the original).
    """
    counts: dict[str, int] = {}
    order: list[str] = []

    def feed(tokens: Iterable[str]) -> None:
        for token in tokens:
            if token not in counts:
                counts[token] = 0
                order.append(token)
            counts[token] += 1

    for turn in corpus.turns():
        if bilingual:
            feed(TRANSLATED_PREFIX + t for t in tokenize(turn.classifier_text()))
            feed(ORIGINAL_PREFIX + t for t in tokenize(turn.text_original))
        elif field == "classifier":
            feed(tokenize(turn.classifier_text()))
        elif field == "original":
            feed(tokenize(turn.text_original))
        elif field == "translated":
            feed(tokenize(turn.text_translated or ""))
        else:
            raise ValueError(f"unknown text field {field!r}")
    return Vocabulary(token for token in order if counts[token] >= min_count)


def truncate_tokens(tokens: list[str], window: int = WINDOW) -> list[str]:
    """Fit tokens into the window: first window-2 tokens plus the last two."""
    if len(tokens) <= window:
        return tokens
    return tokens[: window - TAIL_KEEP] + tokens[-TAIL_KEEP:]


def encode_turn_tokens(
    text: str,
    vocab: Vocabulary,
    window: int = WINDOW,
    prefix: str = "",
) -> list[int]:
    """Token-id window of exact length `window`, right-padded with PAD ids.

    Over-length turns keep their first window-2 and final two tokens;
    out-of-vocabulary tokens map to UNK. Empty text yields all PAD.
    """
    tokens = truncate_tokens(tokenize(text), window)
    ids = [vocab.id(prefix + token) for token in tokens]
    ids.extend([PAD_ID] * (window - len(ids)))
    return ids
