"""Skip-gram with negative sampling and CBOW, trained from scratch.

Both models keep two dense matrices: input vectors W (returned as the word
embedding) and output vectors C. Training is plain SGD on the
negative-sampling logistic objective, processed in batches in a fixed
seeded order, so a given seed always reproduces the same matrices bit for
bit. The learning rate decays linearly to 1e-4 of its initial value over
the whole run.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from .embeddings import EmbeddingMatrix, EmbeddingMetadata, Model, TrainConfig
from .preprocess import TokenizedCorpus
from .util import log_sigmoid, scatter_add, seeded_matrix, segment_weighted_sums, sigmoid

log = logging.getLogger(__name__)

NEGATIVE_POWER = 0.75
FINAL_RATE_FRACTION = 1e-4

_W_STREAM = 1
_C_STREAM = 2


# ----------------------------------------------------------------------
# per-example objective, used by the batch kernels and by gradient tests
# ----------------------------------------------------------------------

def sgns_pair_loss(center: np.ndarray, context: np.ndarray, negatives: np.ndarray) -> float:
    """-log sigma(w.c) - sum_k log sigma(-w.n_k) for one training pair."""
    pos = float(center @ context)
    neg = negatives @ center
    return float(-(log_sigmoid(pos) + log_sigmoid(-neg).sum()))


def sgns_pair_gradients(
    center: np.ndarray, context: np.ndarray, negatives: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of sgns_pair_loss w.r.t. (center, context, negatives)."""
    pos_coef = sigmoid(float(center @ context)) - 1.0
    neg_coef = sigmoid(negatives @ center)
    g_center = pos_coef * context + neg_coef @ negatives
    g_context = pos_coef * center
    g_negatives = neg_coef[:, None] * center[None, :]
    return g_center, g_context, g_negatives


def cbow_loss(contexts: np.ndarray, center: np.ndarray, negatives: np.ndarray) -> float:
    """Objective for one position: the averaged context predicts the center."""
    h = contexts.mean(axis=0)
    pos = float(h @ center)
    neg = negatives @ h
    return float(-(log_sigmoid(pos) + log_sigmoid(-neg).sum()))


def cbow_gradients(
    contexts: np.ndarray, center: np.ndarray, negatives: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of cbow_loss w.r.t. (contexts, center, negatives)."""
    h = contexts.mean(axis=0)
    pos_coef = sigmoid(float(h @ center)) - 1.0
    neg_coef = sigmoid(negatives @ h)
    g_h = pos_coef * center + neg_coef @ negatives
    g_contexts = np.tile(g_h / len(contexts), (len(contexts), 1))
    g_center = pos_coef * h
    g_negatives = neg_coef[:, None] * h[None, :]
    return g_contexts, g_center, g_negatives


# ----------------------------------------------------------------------
# batched training
# ----------------------------------------------------------------------

def _negative_cdf(frequencies: np.ndarray) -> np.ndarray:
    weights = frequencies.astype(np.float64) ** NEGATIVE_POWER
    return np.cumsum(weights / weights.sum())


def _draw_negatives(rng: np.random.Generator, cdf: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    return np.searchsorted(cdf, rng.random(shape), side="right").astype(np.int32)


def _skipgram_pairs(documents: tuple[np.ndarray, ...], window: int) -> tuple[np.ndarray, np.ndarray]:
    centers: list[np.ndarray] = []
    contexts: list[np.ndarray] = []
    for doc in documents:
        n = len(doc)
        if n < 2:
            continue
        for distance in range(1, min(window, n - 1) + 1):
            left = doc[:-distance]
            right = doc[distance:]
            centers.append(left)
            contexts.append(right)
            centers.append(right)
            contexts.append(left)
    if not centers:
        raise ValueError("corpus has no token pairs inside the window")
    return (
        np.concatenate(centers).astype(np.int32),
        np.concatenate(contexts).astype(np.int32),
    )


def _context_table(
    documents: tuple[np.ndarray, ...], window: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per position: center id, fixed-width context ids (-1 padded), mask."""
    offsets = [s for s in range(-window, window + 1) if s != 0]
    center_parts: list[np.ndarray] = []
    table_parts: list[np.ndarray] = []
    for doc in documents:
        n = len(doc)
        if n < 2:
            continue
        table = np.full((n, len(offsets)), -1, dtype=np.int32)
        for slot, s in enumerate(offsets):
            if abs(s) >= n:
                continue
            if s < 0:
                table[-s:, slot] = doc[: n + s]
            else:
                table[: n - s, slot] = doc[s:]
        center_parts.append(doc.astype(np.int32))
        table_parts.append(table)
    if not center_parts:
        raise ValueError("corpus has no token pairs inside the window")
    centers = np.concatenate(center_parts)
    table = np.concatenate(table_parts, axis=0)
    return centers, table, table >= 0


class _LinearRate:
    def __init__(self, initial: float, total_steps: int):
        self.initial = initial
        self.total = max(total_steps, 1)
        self.step = 0

    def next(self) -> float:
        progress = self.step / self.total
        self.step += 1
        return self.initial * (1.0 - progress * (1.0 - FINAL_RATE_FRACTION))


def sgns_batch_loss(
    W: np.ndarray, C: np.ndarray, centers: np.ndarray, contexts: np.ndarray, negatives: np.ndarray
) -> float:
    w = W[centers]
    pos = np.einsum("bd,bd->b", w, C[contexts])
    neg = np.einsum("bkd,bd->bk", C[negatives], w)
    return float(-(log_sigmoid(pos).sum() + log_sigmoid(-neg).sum()))


def sgns_batch_step(
    W: np.ndarray,
    C: np.ndarray,
    centers: np.ndarray,
    contexts: np.ndarray,
    negatives: np.ndarray,
    rate: float,
) -> None:
    """One SGD step on a batch of (center, context, negatives) triples.

    The learning rate is folded into the logistic coefficients, and every
    update is a coefficient-weighted copy of an existing row, so the
    scatter phase runs as grouped rank-one sums instead of materializing
    per-pair outer products.
    """
    b = len(centers)
    k = negatives.shape[1]
    w = W[centers]
    cp = C[contexts]
    cn = C[negatives]
    pos_coef = (sigmoid(np.einsum("bd,bd->b", w, cp)) - 1.0) * (-rate)
    neg_coef = sigmoid(np.einsum("bkd,bd->bk", cn, w)) * (-rate)
    d_w = pos_coef[:, None] * cp + np.einsum("bk,bkd->bd", neg_coef, cn)
    scatter_add(W, centers, d_w)
    # every output-side update is coef * w[pair]: one grouped pass over
    # positives and negatives together
    rows = np.concatenate([contexts, negatives.ravel()])
    weights = np.concatenate([pos_coef, neg_coef.ravel()])
    pair_of_update = np.concatenate(
        [np.arange(b, dtype=np.int64), np.repeat(np.arange(b, dtype=np.int64), k)]
    )
    unique, sums = segment_weighted_sums(rows, weights, pair_of_update, w)
    C[unique] += sums


def cbow_batch_loss(
    W: np.ndarray,
    C: np.ndarray,
    centers: np.ndarray,
    table: np.ndarray,
    mask: np.ndarray,
    negatives: np.ndarray,
) -> float:
    counts = mask.sum(axis=1)
    h = (W[table] * mask[:, :, None]).sum(axis=1) / counts[:, None]
    pos = np.einsum("bd,bd->b", h, C[centers])
    neg = np.einsum("bkd,bd->bk", C[negatives], h)
    return float(-(log_sigmoid(pos).sum() + log_sigmoid(-neg).sum()))


def cbow_batch_step(
    W: np.ndarray,
    C: np.ndarray,
    centers: np.ndarray,
    table: np.ndarray,
    mask: np.ndarray,
    negatives: np.ndarray,
    rate: float,
) -> None:
    b = len(centers)
    k = negatives.shape[1]
    counts = mask.sum(axis=1)
    batch_idx, slot_idx = np.nonzero(mask)
    members = table[batch_idx, slot_idx]
    inv_counts = (1.0 / counts).astype(W.dtype)
    # h[b] = mean of the context vectors, as a grouped weighted gather;
    # alignment with the batch requires every position to keep a context
    _, h = segment_weighted_sums(batch_idx, inv_counts[batch_idx], members, W)
    if len(h) != b:
        raise ValueError("every position must have at least one context word")
    o = C[centers]
    cn = C[negatives]
    pos_coef = (sigmoid(np.einsum("bd,bd->b", h, o)) - 1.0) * (-rate)
    neg_coef = sigmoid(np.einsum("bkd,bd->bk", cn, h)) * (-rate)
    d_h = pos_coef[:, None] * o + np.einsum("bk,bkd->bd", neg_coef, cn)
    unique, sums = segment_weighted_sums(members, inv_counts[batch_idx], batch_idx, d_h)
    W[unique] += sums
    rows = np.concatenate([centers, negatives.ravel()])
    weights = np.concatenate([pos_coef, neg_coef.ravel()])
    pair_of_update = np.concatenate(
        [np.arange(b, dtype=np.int64), np.repeat(np.arange(b, dtype=np.int64), k)]
    )
    unique, sums = segment_weighted_sums(rows, weights, pair_of_update, h)
    C[unique] += sums


def _init_matrices(
    words: tuple[str, ...], dim: int, seed: int, dtype=np.float32
) -> tuple[np.ndarray, np.ndarray]:
    # float32 halves the memory traffic of the batch kernels; the seeded
    # float64 draw happens first so the values themselves are dtype-stable
    bound = 0.5 / dim
    W = seeded_matrix(len(words), dim, seed, _W_STREAM, -bound, bound).astype(dtype)
    C = seeded_matrix(len(words), dim, seed, _C_STREAM, -bound, bound).astype(dtype)
    return W, C


def _metadata(corpus: TokenizedCorpus, config: TrainConfig, run_index: int) -> EmbeddingMetadata:
    source = corpus.vocabulary.source
    return EmbeddingMetadata(
        model=config.model,
        language=source[0] if source else None,
        version=source[1] if source else None,
        seed=config.seed,
        learning_rate=config.resolved_rate(),
        run_index=run_index,
    )


def train_sgns(corpus: TokenizedCorpus, config: TrainConfig, run_index: int = 0) -> EmbeddingMatrix:
    """Train skip-gram vectors; returns the target-side (input) matrix."""
    if config.model is not Model.SGNS:
        raise ValueError(f"config.model must be SGNS, got {config.model}")
    config.validated()
    if config.negative_samples < 1:
        raise ValueError("negative_samples must be >= 1")

    vocab = corpus.vocabulary
    W, C = _init_matrices(vocab.words, config.dim, config.seed)
    centers, contexts = _skipgram_pairs(corpus.documents, config.window)
    cdf = _negative_cdf(vocab.frequencies)
    rng = np.random.default_rng(config.seed)

    batches_per_epoch = math.ceil(len(centers) / config.batch_size)
    rate = _LinearRate(config.resolved_rate(), config.epochs * batches_per_epoch)
    for epoch in range(config.epochs):
        order = rng.permutation(len(centers))
        for start in range(0, len(order), config.batch_size):
            sel = order[start:start + config.batch_size]
            negatives = _draw_negatives(rng, cdf, (len(sel), config.negative_samples))
            sgns_batch_step(W, C, centers[sel], contexts[sel], negatives, rate.next())
        log.debug("sgns epoch %d/%d done", epoch + 1, config.epochs)

    return EmbeddingMatrix(words=vocab.words, vectors=W, metadata=_metadata(corpus, config, run_index))


def train_cbow(corpus: TokenizedCorpus, config: TrainConfig, run_index: int = 0) -> EmbeddingMatrix:
    """Train CBOW vectors: averaged context predicts the center word."""
    if config.model is not Model.CBOW:
        raise ValueError(f"config.model must be CBOW, got {config.model}")
    config.validated()
    if config.negative_samples < 1:
        raise ValueError("negative_samples must be >= 1")

    vocab = corpus.vocabulary
    W, C = _init_matrices(vocab.words, config.dim, config.seed)
    centers, table, mask = _context_table(corpus.documents, config.window)
    cdf = _negative_cdf(vocab.frequencies)
    rng = np.random.default_rng(config.seed)

    batches_per_epoch = math.ceil(len(centers) / config.batch_size)
    rate = _LinearRate(config.resolved_rate(), config.epochs * batches_per_epoch)
    for epoch in range(config.epochs):
        order = rng.permutation(len(centers))
        for start in range(0, len(order), config.batch_size):
            sel = order[start:start + config.batch_size]
            negatives = _draw_negatives(rng, cdf, (len(sel), config.negative_samples))
            cbow_batch_step(W, C, centers[sel], table[sel], mask[sel], negatives, rate.next())
        log.debug("cbow epoch %d/%d done", epoch + 1, config.epochs)

    return EmbeddingMatrix(words=vocab.words, vectors=W, metadata=_metadata(corpus, config, run_index))
