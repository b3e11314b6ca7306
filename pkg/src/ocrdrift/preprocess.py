"""Text normalization, tokenization, and frequency-filtered vocabularies."""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import PAD, Corpus, Language, Version


class _DropTable(dict):
    """str.translate table deleting digits, punctuation, symbols and '@'.

    Keyed by codepoint; entries are computed on first sight and cached for
    the life of the process. Digits are Unicode category N*, punctuation
    and symbols are P* and S*.
    """

    def __missing__(self, codepoint: int) -> str | None:
        ch = chr(codepoint)
        drop = ch == PAD or unicodedata.category(ch)[0] in "NPS"
        result = None if drop else ch
        self[codepoint] = result
        return result


_DROP_TABLE = _DropTable()


def normalize(text: str) -> str:
    """Lowercase, drop digits/punctuation/symbols, collapse whitespace."""
    cleaned = text.lower().translate(_DROP_TABLE)
    return " ".join(cleaned.split())


def tokenize(text: str) -> list[str]:
    """Split normalized text on spaces; never yields empty tokens."""
    return text.split()


@dataclass(frozen=True)
class Vocabulary:
    """Dense word ids with full corpus frequencies for retained words.

    Ids are assigned by descending frequency (ties broken alphabetically),
    so identical input always produces identical ids.
    """

    word_to_id: dict[str, int]
    frequencies: np.ndarray
    min_count: int
    source: tuple[Language, Version] | None = None
    words: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        ordered = sorted(self.word_to_id, key=self.word_to_id.get)
        object.__setattr__(self, "words", tuple(ordered))

    def __len__(self) -> int:
        return len(self.word_to_id)

    def __contains__(self, word: str) -> bool:
        return word in self.word_to_id

    def encode(self, tokens: Iterable[str]) -> np.ndarray:
        """Map tokens to ids, silently dropping out-of-vocabulary tokens."""
        w2i = self.word_to_id
        return np.array([w2i[t] for t in tokens if t in w2i], dtype=np.int32)


def build_vocabulary(
    documents: Iterable[Sequence[str]],
    min_count: int = 5,
    source: tuple[Language, Version] | None = None,
) -> Vocabulary:
    """Count tokens across documents and keep words seen >= min_count times."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    counts = Counter()
    for tokens in documents:
        counts.update(tokens)
    kept = [(w, c) for w, c in counts.items() if c >= min_count]
    if not kept:
        raise ValueError("empty vocabulary: every word fell below min_count")
    kept.sort(key=lambda item: (-item[1], item[0]))
    word_to_id = {w: i for i, (w, _) in enumerate(kept)}
    freqs = np.array([c for _, c in kept], dtype=np.int64)
    return Vocabulary(word_to_id=word_to_id, frequencies=freqs, min_count=min_count, source=source)


@dataclass(frozen=True)
class TokenizedCorpus:
    """Documents as id sequences over one vocabulary."""

    documents: tuple[np.ndarray, ...]
    vocabulary: Vocabulary


def encode_documents(documents: Iterable[Sequence[str]], vocabulary: Vocabulary) -> TokenizedCorpus:
    return TokenizedCorpus(
        documents=tuple(vocabulary.encode(tokens) for tokens in documents),
        vocabulary=vocabulary,
    )


def preprocess_corpus(corpus: Corpus, version: Version, min_count: int = 5) -> TokenizedCorpus:
    """Normalize + tokenize one corpus version, build its vocabulary, encode."""
    token_docs = [tokenize(normalize(text)) for text in corpus.texts(version)]
    vocab = build_vocabulary(token_docs, min_count=min_count, source=(corpus.language, version))
    return encode_documents(token_docs, vocab)


@dataclass(frozen=True)
class VocabIntersection:
    """Words present in every participating vocabulary, alphabetical.

    `mappings[j][i]` is the id of `words[i]` in the j-th source vocabulary.
    """

    words: tuple[str, ...]
    mappings: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.words)


def intersect_words(word_sets: Sequence[Iterable[str]]) -> list[str]:
    """Sorted intersection of arbitrary word collections."""
    if len(word_sets) < 2:
        raise ValueError("need at least two vocabularies to intersect")
    common = set(word_sets[0])
    for ws in word_sets[1:]:
        common &= set(ws)
    if not common:
        raise ValueError("empty vocabulary intersection")
    return sorted(common)


def intersect_vocabularies(vocabs: Sequence[Vocabulary]) -> VocabIntersection:
    words = intersect_words([v.word_to_id.keys() for v in vocabs])
    mappings = tuple(
        np.array([v.word_to_id[w] for w in words], dtype=np.int64) for v in vocabs
    )
    return VocabIntersection(words=tuple(words), mappings=mappings)


def write_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    """One `word<TAB>frequency` line per word, alphabetical."""
    lines = [
        f"{word}\t{int(vocab.frequencies[vocab.word_to_id[word]])}"
        for word in sorted(vocab.word_to_id)
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_vocabulary(path: str | Path, min_count: int = 1) -> Vocabulary:
    counts: dict[str, int] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line:
            continue
        try:
            word, freq = line.split("\t")
            counts[word] = int(freq)
        except ValueError as exc:
            raise ValueError(f"malformed vocabulary line {lineno}: {line!r}") from exc
    kept = [(w, c) for w, c in counts.items() if c >= min_count]
    if not kept:
        raise ValueError("empty vocabulary")
    kept.sort(key=lambda item: (-item[1], item[0]))
    return Vocabulary(
        word_to_id={w: i for i, (w, _) in enumerate(kept)},
        frequencies=np.array([c for _, c in kept], dtype=np.int64),
        min_count=min_count,
    )
