"""Windowed word-context co-occurrence counts over a tokenized corpus."""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .preprocess import TokenizedCorpus, Vocabulary


class Weighting(Enum):
    FLAT = "flat"
    HARMONIC = "harmonic"


@dataclass(frozen=True)
class CooccurrenceMatrix:
    """Sparse symmetric counts of words seen within a window of each other.

    counts[w, c] accumulates one unit (flat) or 1/distance (harmonic) for
    every corpus position where word w has word c at that distance on
    either side, never across document boundaries.
    """

    counts: sp.csr_matrix
    window_size: int
    weighting: Weighting
    vocabulary: Vocabulary

    @property
    def row_sums(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=1)).ravel()

    @property
    def total(self) -> float:
        return float(self.counts.sum())

    @property
    def size(self) -> int:
        return self.counts.shape[0]


def count_cooccurrences(
    corpus: TokenizedCorpus,
    window_size: int = 5,
    weighting: Weighting = Weighting.FLAT,
) -> CooccurrenceMatrix:
    if window_size < 1:
        raise ValueError("window_size must be >= 1")
    if not any(len(doc) for doc in corpus.documents):
        raise ValueError("cannot count co-occurrences of an empty corpus")
    vocab_size = len(corpus.vocabulary)

    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    for doc in corpus.documents:
        n = len(doc)
        if n < 2:
            continue
        for distance in range(1, min(window_size, n - 1) + 1):
            left = doc[:-distance].astype(np.int64)
            right = doc[distance:].astype(np.int64)
            w = 1.0 if weighting is Weighting.FLAT else 1.0 / distance
            # each ordered pair is counted once per direction
            rows.append(left)
            cols.append(right)
            rows.append(right)
            cols.append(left)
            weights.append(np.full(2 * len(left), w))

    if not rows:
        raise ValueError("no token pairs inside the window (documents too short)")
    matrix = sp.coo_matrix(
        (np.concatenate(weights), (np.concatenate(rows), np.concatenate(cols))),
        shape=(vocab_size, vocab_size),
    ).tocsr()
    matrix.sum_duplicates()
    return CooccurrenceMatrix(
        counts=matrix,
        window_size=window_size,
        weighting=weighting,
        vocabulary=corpus.vocabulary,
    )


_TRIPLE = struct.Struct("<IId")


def save_matrix(matrix: CooccurrenceMatrix, path: str | Path) -> None:
    """Binary (word id, context id, weight) triples plus a JSON sidecar."""
    path = Path(path)
    coo = matrix.counts.tocoo()
    with open(path, "wb") as fh:
        for i, j, v in zip(coo.row, coo.col, coo.data):
            fh.write(_TRIPLE.pack(int(i), int(j), float(v)))
    sidecar = {
        "vocab_size": matrix.size,
        "window_size": matrix.window_size,
        "weighting": matrix.weighting.value,
        "entries": int(coo.nnz),
    }
    path.with_suffix(path.suffix + ".json").write_text(
        json.dumps(sidecar, indent=2) + "\n", encoding="utf-8"
    )


def load_matrix(path: str | Path, vocabulary: Vocabulary) -> CooccurrenceMatrix:
    path = Path(path)
    sidecar = json.loads(path.with_suffix(path.suffix + ".json").read_text(encoding="utf-8"))
    raw = path.read_bytes()
    if len(raw) % _TRIPLE.size:
        raise ValueError(f"{path}: truncated triple stream")
    n = len(raw) // _TRIPLE.size
    rows = np.empty(n, dtype=np.int64)
    cols = np.empty(n, dtype=np.int64)
    vals = np.empty(n, dtype=np.float64)
    for k, (i, j, v) in enumerate(_TRIPLE.iter_unpack(raw)):
        rows[k], cols[k], vals[k] = i, j, v
    size = int(sidecar["vocab_size"])
    matrix = sp.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()
    return CooccurrenceMatrix(
        counts=matrix,
        window_size=int(sidecar["window_size"]),
        weighting=Weighting(sidecar["weighting"]),
        vocabulary=vocabulary,
    )
