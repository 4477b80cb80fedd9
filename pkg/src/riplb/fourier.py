"""Finite-field Fourier matrices, sampled submatrices and brute-force RIP constants."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .field import FieldError, FieldParams, FpVector
from .shattering import SampleSeq

MAX_SUPPORTS = 10**6
# bounds the (batch, k, k, n) difference array to a few million entries
_BATCH_ENTRIES = 1 << 22


class GuardExceeded(RuntimeError):
    pass


def fourier_submatrix(row_index: Sequence[Sequence[int]], col_index: Sequence[Sequence[int]], params: FieldParams) -> np.ndarray:
    """Dense block of A with entries exp(2 pi i <row_a, col_b> / p)."""
    rows = np.array([params.vector(r) for r in row_index], dtype=np.int64).reshape(-1, params.n)
    cols = np.array([params.vector(c) for c in col_index], dtype=np.int64).reshape(-1, params.n)
    return _fourier_block(rows, cols, params.p)


def _fourier_block(rows: np.ndarray, cols: np.ndarray, p: int) -> np.ndarray:
    phase = (rows @ cols.T) % p
    # exact values for the real roots of unity keep p=2 entries at exactly +-1
    if p == 2:
        return np.where(phase == 0, 1.0, -1.0).astype(complex)
    return np.exp(2j * np.pi * phase / p)


def full_fourier_matrix(params: FieldParams) -> np.ndarray:
    v = params.all_vectors()
    return _fourier_block(v, v, params.p)


def apply(matrix: np.ndarray, vector: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix)
    vector = np.asarray(vector, dtype=complex)
    if matrix.ndim != 2 or vector.ndim != 1 or matrix.shape[1] != vector.shape[0]:
        raise ValueError(f"cannot apply {matrix.shape} matrix to vector of shape {vector.shape}")
    return matrix @ vector


@dataclass(frozen=True)
class RipEstimate:
    """Smallest epsilon for which the normalized sample matrix is (k, epsilon)-RIP.

    ``witness_support`` attains ``epsilon``.  The two sides are also kept
    apart: ``min_eigenvalue`` is the smallest Gram eigenvalue over all
    supports (attained on ``min_support``), ``max_eigenvalue`` the largest.
    """

    k: int
    epsilon: float
    witness_support: tuple[FpVector, ...]
    min_eigenvalue: float
    min_support: tuple[FpVector, ...]
    max_eigenvalue: float
    supports_checked: int


def _support_batches(N: int, k: int, n: int, translate: bool):
    size = max(64, _BATCH_ENTRIES // (k * k * n))
    if translate:
        it = ((0,) + rest for rest in itertools.combinations(range(1, N), k - 1))
    else:
        it = itertools.combinations(range(N), k)
    while True:
        chunk = list(itertools.islice(it, size))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.int64).reshape(len(chunk), k)


def gram_eigenvalues(g: np.ndarray, supports: np.ndarray, params: FieldParams) -> np.ndarray:
    """Eigenvalues of M_S* M_S for a batch of supports, ascending per row.

    ``g[x] = (1/q) sum_r omega**<r, x>`` so the Gram entry for columns
    ``a, b`` is ``g[b - a]``.
    """
    p = params.p
    digits = params.digits(supports)  # (B, k, n)
    diff = (digits[:, None, :, :] - digits[:, :, None, :]) % p  # (B, k, k, n) = s_j - s_i
    powers = p ** np.arange(params.n - 1, -1, -1, dtype=np.int64)
    gram = g[diff @ powers]
    return np.linalg.eigvalsh(gram)


def difference_profile(q_rows: SampleSeq) -> np.ndarray:
    """Column sums of the normalized Gram structure: g[x] = (1/q) sum_r omega**<r, x>."""
    params = q_rows.params
    block = _fourier_block(q_rows.as_array(), params.all_vectors(), params.p)
    return block.sum(axis=0) / q_rows.q


def rip_epsilon(q_rows: SampleSeq, k: int, params: FieldParams, *, max_supports: int = MAX_SUPPORTS, exhaustive: bool = False) -> RipEstimate:
    """Brute-force RIP constant of ``A_{Q,.} / sqrt(q)`` at sparsity ``k``.

    By default only supports containing the zero column are scanned: the Gram
    block of a support is unchanged by translating the support, so this
    covers every Gram block that occurs.  ``exhaustive=True`` scans all
    ``C(N, k)`` supports in lexicographic order.
    """
    if q_rows.params != params:
        raise FieldError(f"ambient mismatch: {q_rows.params} vs {params}")
    if q_rows.q == 0:
        raise ValueError("rip_epsilon needs at least one sampled row")
    N = params.N
    if not 1 <= k <= N:
        raise ValueError(f"sparsity k must lie in [1, {N}], got {k}")
    total = math.comb(N, k)
    if total > max_supports:
        raise GuardExceeded(f"C({N}, {k}) = {total} supports exceeds the guard {max_supports}")

    g = difference_profile(q_rows)
    best_eps, best_support = -np.inf, None
    lo, lo_support = np.inf, None
    hi = -np.inf
    checked = 0
    for batch in _support_batches(N, k, params.n, translate=not exhaustive):
        lam = gram_eigenvalues(g, batch, params)
        lam_min, lam_max = lam[:, 0], lam[:, -1]
        eps = np.maximum(lam_max - 1.0, 1.0 - lam_min)
        i = int(np.argmax(eps))
        if eps[i] > best_eps:
            best_eps, best_support = float(eps[i]), batch[i]
        j = int(np.argmin(lam_min))
        if lam_min[j] < lo:
            lo, lo_support = float(lam_min[j]), batch[j]
        hi = max(hi, float(lam_max.max()))
        checked += len(batch)

    as_vectors = lambda s: tuple(params.from_index(int(x)) for x in s)
    return RipEstimate(
        k=k,
        epsilon=max(best_eps, 0.0),
        witness_support=as_vectors(best_support),
        min_eigenvalue=lo,
        min_support=as_vectors(lo_support),
        max_eigenvalue=hi,
        supports_checked=checked,
    )


def support_eigenvalues(q_rows: SampleSeq, support: Sequence[Sequence[int]]) -> np.ndarray:
    """Gram eigenvalues of the normalized sample matrix restricted to ``support``."""
    params = q_rows.params
    m = fourier_submatrix(q_rows.rows, support, params) / math.sqrt(q_rows.q)
    return np.linalg.eigvalsh(m.conj().T @ m)
