from .io import (
    SentenceEmbeddingTable,
    WordVectorTable,
    load_corpus,
    load_sentence_embeddings,
    load_word_vectors,
    pair_with_previous,
    write_corpus,
    write_sentence_embeddings,
    write_word_vectors,
)
from .sampling import kfold_split, label_quotas, stratified_sample
from .types import Corpus, DataSplit, Dialogue, LabelSet, Turn
from .vocab import (
    ORIGINAL_PREFIX,
    PAD,
    PAD_ID,
    TRANSLATED_PREFIX,
    UNK,
    UNK_ID,
    WINDOW,
    Vocabulary,
    build_vocab,
    encode_turn_tokens,
    tokenize,
    truncate_tokens,
)

__all__ = [
    "Corpus",
    "DataSplit",
    "Dialogue",
    "LabelSet",
    "Turn",
    "SentenceEmbeddingTable",
    "WordVectorTable",
    "load_corpus",
    "load_sentence_embeddings",
    "load_word_vectors",
    "pair_with_previous",
    "write_corpus",
    "write_sentence_embeddings",
    "write_word_vectors",
    "kfold_split",
    "label_quotas",
    "stratified_sample",
    "ORIGINAL_PREFIX",
    "PAD",
    "PAD_ID",
    "TRANSLATED_PREFIX",
    "UNK",
    "UNK_ID",
    "WINDOW",
    "Vocabulary",
    "build_vocab",
    "encode_turn_tokens",
    "tokenize",
    "truncate_tokens",
]
