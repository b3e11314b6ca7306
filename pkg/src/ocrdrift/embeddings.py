"""Word embedding matrices with provenance, and their text serialization."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .corpus import Language, Version


class Model(Enum):
    PPMI = "ppmi"
    SGNS = "sgns"
    CBOW = "cbow"
    GLOVE = "glove"
    EXTERNAL = "external"


class RateProfile(Enum):
    """Named learning-rate presets for the gradient-trained models."""

    FAST = "fast"
    SLOW = "slow"


RATE_PROFILES = {RateProfile.FAST: 1e-3, RateProfile.SLOW: 1e-4}


@dataclass(frozen=True)
class TrainConfig:
    model: Model
    dim: int = 100
    window: int = 5
    learning_rate: float | None = None
    epochs: int = 5
    negative_samples: int = 5
    min_count: int = 5
    seed: int = 0
    rate_profile: RateProfile | None = None
    batch_size: int = 8192

    def resolved_rate(self) -> float:
        if self.learning_rate is not None:
            return self.learning_rate
        if self.rate_profile is not None:
            return RATE_PROFILES[self.rate_profile]
        raise ValueError("set either learning_rate or rate_profile")

    def validated(self) -> "TrainConfig":
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        return self


@dataclass(frozen=True)
class EmbeddingMetadata:
    model: Model
    language: Language | None = None
    version: Version | None = None
    seed: int | None = None
    learning_rate: float | None = None
    run_index: int = 0


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Per-word vectors: a dense (V, dim) array or a sparse CSR matrix."""

    words: tuple[str, ...]
    vectors: np.ndarray | sp.csr_matrix
    metadata: EmbeddingMetadata
    word_to_row: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        if self.vectors.shape[0] != len(self.words):
            raise ValueError(
                f"{self.vectors.shape[0]} vectors for {len(self.words)} words"
            )
        lookup = {w: i for i, w in enumerate(self.words)}
        if len(lookup) != len(self.words):
            raise ValueError("duplicate word in embedding")
        object.__setattr__(self, "word_to_row", lookup)

    @property
    def is_dense(self) -> bool:
        return isinstance(self.vectors, np.ndarray)

    @property
    def dim(self) -> int | None:
        """Vector size for dense embeddings; None for sparse rows."""
        return int(self.vectors.shape[1]) if self.is_dense else None

    def __contains__(self, word: str) -> bool:
        return word in self.word_to_row

    def __len__(self) -> int:
        return len(self.words)

    def row(self, word: str) -> np.ndarray:
        i = self.word_to_row[word]
        return self.vectors[i] if self.is_dense else self.vectors.getrow(i)

    def take(self, rows: np.ndarray) -> "np.ndarray | sp.csr_matrix":
        return self.vectors[rows]

    def with_metadata(self, **changes) -> "EmbeddingMatrix":
        return replace(self, metadata=replace(self.metadata, **changes))


def export_embeddings(emb: EmbeddingMatrix, path: str | Path) -> None:
    """Write the dense text format: a `<count> <dim>` header, then one
    `<word> <v1> ... <vdim>` line per word at 9 significant digits."""
    if not emb.is_dense:
        raise TypeError("only dense embeddings can be exported to the text format")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(emb.words)} {emb.dim}\n")
        for word, vec in zip(emb.words, emb.vectors):
            if " " in word or not word:
                raise ValueError(f"word not serializable in text format: {word!r}")
            fh.write(word + " " + " ".join(f"{v:.9g}" for v in vec) + "\n")


def save_sparse_embeddings(emb: EmbeddingMatrix, path: str | Path) -> None:
    """Persist sparse rows (CSR components plus the word list) as .npz."""
    if emb.is_dense:
        raise TypeError("use export_embeddings for dense matrices")
    m = emb.vectors.tocsr()
    np.savez_compressed(
        path,
        data=m.data,
        indices=m.indices,
        indptr=m.indptr,
        shape=np.asarray(m.shape, dtype=np.int64),
        words=np.asarray(emb.words, dtype=np.str_),
        model=np.asarray(emb.metadata.model.value, dtype=np.str_),
    )


def load_sparse_embeddings(path: str | Path) -> EmbeddingMatrix:
    with np.load(path, allow_pickle=False) as payload:
        matrix = sp.csr_matrix(
            (payload["data"], payload["indices"], payload["indptr"]),
            shape=tuple(payload["shape"]),
        )
        words = tuple(str(w) for w in payload["words"])
        model = Model(str(payload["model"]))
    return EmbeddingMatrix(
        words=words, vectors=matrix, metadata=EmbeddingMetadata(model=model)
    )


def import_embeddings(path: str | Path) -> EmbeddingMatrix:
    """Read the text format back; errors name the offending line."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: malformed header at line 1")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ValueError(f"{path}: malformed header at line 1") from None
        if count < 1 or dim < 1:
            raise ValueError(f"{path}: malformed header at line 1")
        words: list[str] = []
        seen: set[str] = set()
        vectors = np.empty((count, dim), dtype=np.float64)
        lineno = 1
        for lineno, line in enumerate(fh, start=2):
            if lineno - 2 >= count:
                raise ValueError(f"{path}: more rows than the header declares at line {lineno}")
            parts = line.split()
            if len(parts) != dim + 1:
                raise ValueError(
                    f"{path}: expected {dim + 1} fields, got {len(parts)} at line {lineno}"
                )
            word = parts[0]
            if word in seen:
                raise ValueError(f"{path}: duplicate word {word!r} at line {lineno}")
            seen.add(word)
            words.append(word)
            try:
                vectors[lineno - 2] = [float(v) for v in parts[1:]]
            except ValueError:
                raise ValueError(f"{path}: non-numeric value at line {lineno}") from None
        if len(words) != count:
            raise ValueError(f"{path}: header declares {count} rows, found {len(words)}")
    return EmbeddingMatrix(
        words=tuple(words),
        vectors=vectors,
        metadata=EmbeddingMetadata(model=Model.EXTERNAL),
    )
