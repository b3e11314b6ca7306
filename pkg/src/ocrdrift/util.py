"""Small numeric helpers shared across modules."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def sigmoid(x: np.ndarray | float) -> np.ndarray:
    """Numerically stable logistic function (single exponential)."""
    x = np.asarray(x)
    z = np.exp(-np.abs(x))
    t = 1.0 / (1.0 + z)
    return np.where(x >= 0, t, z * t)


def log_sigmoid(x: np.ndarray | float) -> np.ndarray | float:
    """log(sigmoid(x)) without overflow for large negative x."""
    x = np.asarray(x, dtype=np.float64)
    return np.minimum(x, 0.0) - np.log1p(np.exp(-np.abs(x)))


def _group_csr(rows: np.ndarray, n_cols: int, data: np.ndarray, cols: np.ndarray):
    """CSR matrix whose row g selects the entries with the g-th distinct
    value of `rows`; returns (unique_rows, matrix)."""
    order = np.argsort(rows, kind="stable")
    sorted_rows = rows[order]
    starts = np.flatnonzero(np.r_[True, sorted_rows[1:] != sorted_rows[:-1]])
    indptr = np.append(starts, len(order)).astype(np.int64)
    matrix = sp.csr_matrix(
        (data[order], cols[order], indptr), shape=(len(starts), n_cols)
    )
    return sorted_rows[starts], matrix


def segment_sums(rows: np.ndarray, updates: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum update rows that share an index; returns (unique_rows, sums).

    Phrased as a sparse-matrix product: grouping is a one-hot CSR matrix,
    so the accumulation runs in scipy's C kernel instead of np.add.at.
    """
    ones = np.ones(len(rows), dtype=updates.dtype)
    cols = np.arange(len(rows), dtype=np.int64)
    unique, matrix = _group_csr(rows, len(rows), ones, cols)
    return unique, matrix @ updates


def segment_weighted_sums(
    rows: np.ndarray,
    weights: np.ndarray,
    cols: np.ndarray,
    source: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Per distinct row r: sum of weights[i] * source[cols[i]] over rows==r.

    Computes grouped rank-one accumulations without materializing the
    (len(rows), dim) outer-product array.
    """
    unique, matrix = _group_csr(rows, source.shape[0], weights, cols)
    return unique, matrix @ source


def scatter_add(target: np.ndarray, rows: np.ndarray, updates: np.ndarray) -> None:
    """Add `updates` into `target[rows]`, summing duplicate rows.

    Equivalent to np.add.at, but orders of magnitude faster for the batch
    sizes used in training.
    """
    if len(rows) == 0:
        return
    unique, sums = segment_sums(rows, updates)
    target[unique] += sums


def seeded_matrix(
    rows: int,
    dim: int,
    seed: int,
    stream: int,
    low: float,
    high: float,
) -> np.ndarray:
    """Uniform random (rows, dim) matrix, reproducible from (seed, stream)."""
    rng = np.random.default_rng((seed, stream))
    return rng.uniform(low, high, (rows, dim))
