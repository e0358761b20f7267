"""Core data model for dialogue corpora."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from ..errors import LabelError, StructureError


@dataclass(frozen=True)
class Turn:
    """One speaker utterance inside a dialogue."""

    dialogue_id: str
    turn_index: int
    speaker: str
    label: str
    text_original: str
    text_translated: str | None = None

    def classifier_text(self) -> str:
        """Text fed to token-based classifiers: the translation when present."""
        if self.text_translated:
            return self.text_translated
        return self.text_original

    def key(self) -> tuple[str, int]:
        return (self.dialogue_id, self.turn_index)


@dataclass
class Dialogue:
    dialogue_id: str
    turns: list[Turn] = field(default_factory=list)

    def validate(self) -> None:
        for expected, turn in enumerate(self.turns):
            if turn.turn_index != expected:
                raise StructureError(
                    f"dialogue {self.dialogue_id!r}: turn indices must be consecutive "
                    f"from 0, found {turn.turn_index} at position {expected}"
                )


class LabelSet:
    """Ordered, duplicate-free list of dialogue act tags."""

    def __init__(self, tags: Sequence[str]):
        tags = list(tags)
        seen = set()
        for tag in tags:
            if tag in seen:
                raise LabelError(f"duplicate label tag {tag!r}")
            seen.add(tag)
        self._tags = tags
        self._index = {tag: i for i, tag in enumerate(tags)}

    @property
    def tags(self) -> list[str]:
        return list(self._tags)

    def index(self, tag: str) -> int:
        try:
            return self._index[tag]
        except KeyError:
            raise LabelError(f"unknown label {tag!r}") from None

    def tag(self, index: int) -> str:
        if not 0 <= index < len(self._tags):
            raise LabelError(f"label index {index} out of range for {len(self._tags)} tags")
        return self._tags[index]

    def __contains__(self, tag: str) -> bool:
        return tag in self._index

    def __len__(self) -> int:
        return len(self._tags)

    def __iter__(self) -> Iterator[str]:
        return iter(self._tags)

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelSet) and self._tags == other._tags

    def __repr__(self) -> str:
        return f"LabelSet({self._tags!r})"


@dataclass
class Corpus:
    """Dialogues plus the label set they were validated (or inferred) against."""

    dialogues: list[Dialogue]
    label_set: LabelSet

    def turns(self) -> list[Turn]:
        return [turn for dialogue in self.dialogues for turn in dialogue.turns]

    def __len__(self) -> int:
        return sum(len(d.turns) for d in self.dialogues)


@dataclass
class DataSplit:
    """Named, pairwise-disjoint lists of turns (train/dev/test or folds)."""

    parts: dict[str, list[Turn]]

    def __post_init__(self):
        seen: set[tuple[str, int]] = set()
        for name, turns in self.parts.items():
            for turn in turns:
                key = turn.key()
                if key in seen:
                    raise StructureError(f"turn {key} appears in more than one split part ({name})")
                seen.add(key)

    def __getitem__(self, name: str) -> list[Turn]:
        return self.parts[name]
