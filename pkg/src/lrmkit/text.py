"""Token normalization and sentence/chunk splitting shared by lexicon and keyword code."""

from __future__ import annotations

import re

_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'"})
_TOKEN = re.compile(r"[^\W_]+(?:['\-][^\W_]+)*|[^\w\s]")
_SENTENCE_END = re.compile(r"(?<=[.!?])\s+|\n+")


def normalize_token(token: str) -> str:
    """Case-fold and strip punctuation at the token edges; inner apostrophes stay."""
    token = token.translate(_APOSTROPHES).casefold()
    start, end = 0, len(token)
    while start < end and not token[start].isalnum():
        start += 1
    while end > start and not token[end - 1].isalnum():
        end -= 1
    return token[start:end]


def is_word(token: str) -> bool:
    return token[:1].isalnum()


def split_sentences(text: str) -> list[list[list[str]]]:
    """Split text into sentences, each a list of punctuation-free chunks of tokens.

    Sentences end at ``.``, ``!``, ``?`` or a line break; any other punctuation
    ends a chunk.  Tokens keep their original casing.
    """
    sentences = []
    for raw in _SENTENCE_END.split(text.translate(_APOSTROPHES)):
        chunks: list[list[str]] = [[]]
        for token in _TOKEN.findall(raw):
            if is_word(token):
                chunks[-1].append(token)
            elif chunks[-1]:
                chunks.append([])
        chunks = [c for c in chunks if c]
        if chunks:
            sentences.append(chunks)
    return sentences
