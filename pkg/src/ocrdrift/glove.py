"""Embeddings fit by weighted least squares to log co-occurrence counts."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .cooccur import CooccurrenceMatrix, Weighting
from .embeddings import EmbeddingMatrix, EmbeddingMetadata, Model, TrainConfig
from .util import seeded_matrix, segment_sums

log = logging.getLogger(__name__)

X_MAX = 100.0
ALPHA = 0.75
ADAGRAD_RATE = 0.05

_W_STREAM = 3
_C_STREAM = 4
_BW_STREAM = 5
_BC_STREAM = 6


@dataclass
class _Params:
    W: np.ndarray
    Cw: np.ndarray
    bw: np.ndarray
    bc: np.ndarray


def cell_weight(x: np.ndarray) -> np.ndarray:
    """(x / X_MAX)^ALPHA, capped at 1 above X_MAX."""
    return np.minimum((np.asarray(x, dtype=np.float64) / X_MAX) ** ALPHA, 1.0)


def glove_objective(
    matrix: CooccurrenceMatrix,
    W: np.ndarray,
    Cw: np.ndarray,
    bw: np.ndarray,
    bc: np.ndarray,
) -> float:
    """sum over nonzero cells of f(x) * (w.c + b_w + b_c - ln x)^2."""
    coo = matrix.counts.tocoo()
    diff = (
        np.einsum("nd,nd->n", W[coo.row], Cw[coo.col])
        + bw[coo.row]
        + bc[coo.col]
        - np.log(coo.data)
    )
    return float((cell_weight(coo.data) * diff**2).sum())


def train_glove(
    matrix: CooccurrenceMatrix,
    config: TrainConfig,
    run_index: int = 0,
    objective_log: list[float] | None = None,
) -> EmbeddingMatrix:
    """Adaptive per-coordinate gradient descent over the nonzero cells.

    Requires a distance-weighted (harmonic) co-occurrence matrix. The
    returned vectors are the sum of the word and context matrices. When a
    list is passed as objective_log, the full objective evaluated after
    each epoch is appended to it.
    """
    if config.model is not Model.GLOVE:
        raise ValueError(f"config.model must be GLOVE, got {config.model}")
    config.validated()
    if matrix.weighting is not Weighting.HARMONIC:
        raise ValueError("GloVe expects a harmonic-weighted co-occurrence matrix")
    coo = matrix.counts.tocoo()
    if coo.nnz == 0:
        raise ValueError("co-occurrence matrix has no nonzero cells")

    words = matrix.vocabulary.words
    dim = config.dim
    bound = 0.5 / dim
    p = _Params(
        W=seeded_matrix(len(words), dim, config.seed, _W_STREAM, -bound, bound),
        Cw=seeded_matrix(len(words), dim, config.seed, _C_STREAM, -bound, bound),
        bw=seeded_matrix(len(words), 1, config.seed, _BW_STREAM, -bound, bound).ravel(),
        bc=seeded_matrix(len(words), 1, config.seed, _BC_STREAM, -bound, bound).ravel(),
    )
    # near-zero accumulator init: the first step per coordinate has
    # magnitude close to ADAGRAD_RATE, later steps shrink as usual
    acc = _Params(
        W=np.full_like(p.W, 1e-8),
        Cw=np.full_like(p.Cw, 1e-8),
        bw=np.full_like(p.bw, 1e-8),
        bc=np.full_like(p.bc, 1e-8),
    )

    rows = coo.row.astype(np.int64)
    cols = coo.col.astype(np.int64)
    log_counts = np.log(coo.data)
    weights = cell_weight(coo.data)
    rng = np.random.default_rng(config.seed)

    for epoch in range(config.epochs):
        order = rng.permutation(coo.nnz)
        for start in range(0, coo.nnz, config.batch_size):
            sel = order[start:start + config.batch_size]
            i, j = rows[sel], cols[sel]
            wi, cj = p.W[i], p.Cw[j]
            diff = np.einsum("nd,nd->n", wi, cj) + p.bw[i] + p.bc[j] - log_counts[sel]
            coef = 2.0 * weights[sel] * diff
            _adagrad_update(p.W, acc.W, i, coef[:, None] * cj)
            _adagrad_update(p.Cw, acc.Cw, j, coef[:, None] * wi)
            _adagrad_update(p.bw, acc.bw, i, coef)
            _adagrad_update(p.bc, acc.bc, j, coef)
        if objective_log is not None:
            objective_log.append(glove_objective(matrix, p.W, p.Cw, p.bw, p.bc))
        log.debug("glove epoch %d/%d done", epoch + 1, config.epochs)

    source = matrix.vocabulary.source
    return EmbeddingMatrix(
        words=words,
        vectors=p.W + p.Cw,
        metadata=EmbeddingMetadata(
            model=Model.GLOVE,
            language=source[0] if source else None,
            version=source[1] if source else None,
            seed=config.seed,
            learning_rate=ADAGRAD_RATE,
            run_index=run_index,
        ),
    )


def _adagrad_update(params: np.ndarray, acc: np.ndarray, rows: np.ndarray, grads: np.ndarray) -> None:
    """Accumulate per-row gradient sums, then take one adaptive step."""
    unique, sums = segment_sums(rows, grads)
    acc[unique] += sums**2
    params[unique] -= ADAGRAD_RATE * sums / np.sqrt(acc[unique])
