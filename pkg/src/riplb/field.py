"""Exact linear algebra over the prime field F_p.

Vectors of F_p^n are plain tuples of least non-negative residues.  A vector
is also addressed by its integer index in ``[0, p**n)``, reading the first
coordinate as the most significant base-p digit, so integer order and
lexicographic order agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

FpVector = tuple[int, ...]
Signature = tuple[int, ...]

# p**n must stay an exact int64 index
MAX_INDEX = 2**62
MAX_ENUMERATION = 10**7


class FieldError(ValueError):
    """Raised on invalid field parameters or mismatched ambient spaces."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class FieldParams:
    """Prime modulus ``p`` and ambient dimension ``n``; ``N = p**n``."""

    p: int
    n: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise FieldError(f"p must be prime, got {self.p!r}")
        if self.n < 1:
            raise FieldError(f"n must be >= 1, got {self.n}")
        if self.p**self.n > MAX_INDEX:
            raise FieldError(f"p**n = {self.p}**{self.n} exceeds the index range")

    @property
    def N(self) -> int:
        return self.p**self.n

    def vector(self, coords: Iterable[int]) -> FpVector:
        """Validate and return ``coords`` as an element of F_p^n."""
        v = tuple(int(c) for c in coords)
        if len(v) != self.n:
            raise FieldError(f"expected length {self.n}, got {len(v)}")
        if any(c < 0 or c >= self.p for c in v):
            raise FieldError(f"coordinates must lie in [0, {self.p}): {v}")
        return v

    def zero(self) -> FpVector:
        return (0,) * self.n

    def unit(self, i: int) -> FpVector:
        """Standard basis vector e_{i+1} (0-based ``i``)."""
        v = [0] * self.n
        v[i] = 1
        return tuple(v)

    def index(self, v: Sequence[int]) -> int:
        idx = 0
        for c in v:
            idx = idx * self.p + int(c)
        return idx

    def from_index(self, idx: int) -> FpVector:
        if not 0 <= idx < self.N:
            raise FieldError(f"index {idx} outside [0, {self.N})")
        out = []
        for _ in range(self.n):
            idx, c = divmod(idx, self.p)
            out.append(c)
        return tuple(reversed(out))

    def digits(self, indices: np.ndarray) -> np.ndarray:
        """Vectorised inverse of :meth:`index`: shape ``(..., n)`` digit array."""
        indices = np.asarray(indices, dtype=np.int64)
        powers = self.p ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        return (indices[..., None] // powers) % self.p

    def all_vectors(self) -> np.ndarray:
        """Every element of F_p^n as an ``(N, n)`` array, in index order."""
        if self.N > MAX_ENUMERATION:
            raise FieldError(f"refusing to enumerate {self.N} vectors")
        return self.digits(np.arange(self.N))


def _as_matrix(matrix, params: FieldParams) -> np.ndarray:
    a = np.asarray(matrix, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, params.n)
    if a.ndim != 2 or a.shape[1] != params.n:
        raise FieldError(f"matrix shape {a.shape} does not match n={params.n}")
    if a.size and (a.min() < 0 or a.max() >= params.p):
        raise FieldError(f"entries must lie in [0, {params.p})")
    return a


def rref(matrix, params: FieldParams) -> tuple[np.ndarray, int]:
    """Reduced row-echelon form over F_p.

    Returns the reduced matrix (same shape as the input, zero rows at the
    bottom) and its rank.
    """
    a = _as_matrix(matrix, params).copy()
    p = params.p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        others = np.nonzero(a[:, c])[0]
        for i in others:
            if i != r:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        r += 1
    return a, r


def rank(matrix, params: FieldParams) -> int:
    return rref(matrix, params)[1]


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n held by its canonical (reduced row-echelon) basis.

    Build instances with :func:`subspace_from_spanning`; equality and hashing
    compare canonical bases, so equal subspaces compare equal.
    """

    ambient: FieldParams
    basis: tuple[FpVector, ...]

    def __post_init__(self):
        for row in self.basis:
            self.ambient.vector(row)
        if self.basis:
            a = np.array(self.basis, dtype=np.int64)
            reduced, r = rref(a, self.ambient)
            if r != len(self.basis) or not np.array_equal(reduced, a):
                raise FieldError("basis is not in canonical reduced row-echelon form")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.ambient.p**self.dim

    def basis_array(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(self.dim, self.ambient.n)

    def contains(self, v: Sequence[int]) -> bool:
        stacked = np.vstack([self.basis_array(), np.asarray(v, dtype=np.int64)])
        return rank(stacked, self.ambient) == self.dim


def _check_same_ambient(*params: FieldParams) -> FieldParams:
    first = params[0]
    for other in params[1:]:
        if other != first:
            raise FieldError(f"ambient mismatch: {first} vs {other}")
    return first


def canonical_subspace(matrix, params: FieldParams) -> Subspace:
    """Row space of ``matrix`` (rows in F_p^n) as a canonical Subspace."""
    reduced, r = rref(matrix, params)
    return Subspace(params, tuple(tuple(int(x) for x in row) for row in reduced[:r]))


def zero_subspace(params: FieldParams) -> Subspace:
    return Subspace(params, ())


def coordinate_subspace(params: FieldParams, d: int) -> Subspace:
    """span{e_1, ..., e_d}."""
    if not 0 <= d <= params.n:
        raise FieldError(f"need 0 <= d <= n, got d={d}")
    return Subspace(params, tuple(params.unit(i) for i in range(d)))


def subspace_from_spanning(vectors: Sequence[Sequence[int]], params: FieldParams) -> Subspace:
    """Span of ``vectors`` as a canonical Subspace.

    Every vector must belong to F_p^n for the given ``params``; a vector of
    another length is an ambient mismatch.
    """
    if len(vectors) == 0:
        raise FieldError("need at least one spanning vector")
    rows = [params.vector(v) for v in vectors]
    return canonical_subspace(np.array(rows, dtype=np.int64), params)


def subspace_sum(v1: Subspace, v2: Subspace) -> Subspace:
    params = _check_same_ambient(v1.ambient, v2.ambient)
    stacked = np.vstack([v1.basis_array(), v2.basis_array()])
    if stacked.shape[0] == 0:
        return zero_subspace(params)
    return canonical_subspace(stacked, params)


def orthogonal_complement(v: Subspace) -> Subspace:
    """{x : <x, b> = 0 for every b in v}, the null space of the basis matrix."""
    params = v.ambient
    p, n = params.p, params.n
    pivots = [row.index(next(c for c in row if c)) for row in v.basis]
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return zero_subspace(params)
    kernel = np.zeros((len(free), n), dtype=np.int64)
    for j, f in enumerate(free):
        kernel[j, f] = 1
        for row, pc in zip(v.basis, pivots):
            kernel[j, pc] = (-row[f]) % p
    return canonical_subspace(kernel, params)


def intersection(v1: Subspace, v2: Subspace) -> Subspace:
    """V1 ∩ V2 computed as the complement of V1^perp + V2^perp."""
    _check_same_ambient(v1.ambient, v2.ambient)
    return orthogonal_complement(subspace_sum(orthogonal_complement(v1), orthogonal_complement(v2)))


def intersection_dim(v1: Subspace, v2: Subspace) -> int:
    return intersection(v1, v2).dim


def signature(r: Sequence[int], v: Subspace) -> Signature:
    """Inner products of ``r`` with the canonical basis rows of ``v``, mod p.

    Two rows have equal signatures exactly when their Fourier rows agree on
    every column indexed by an element of ``v``.
    """
    p = v.ambient.p
    r = v.ambient.vector(r)
    return tuple(sum(a * b for a, b in zip(r, row)) % p for row in v.basis)


def signatures(rows: np.ndarray, v: Subspace) -> np.ndarray:
    """Vectorised signatures for an ``(..., n)`` row array; shape ``(..., d)``."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.shape[-1] != v.ambient.n:
        raise FieldError(f"rows have length {rows.shape[-1]}, expected {v.ambient.n}")
    return (rows @ v.basis_array().T) % v.ambient.p


def signature_codes(rows: np.ndarray, v: Subspace) -> np.ndarray:
    """Signatures packed into integers in ``[0, p**d)`` (first entry most significant)."""
    sig = signatures(rows, v)
    weights = v.ambient.p ** np.arange(v.dim - 1, -1, -1, dtype=np.int64)
    return sig @ weights


def coefficient_vectors(p: int, d: int) -> list[tuple[int, ...]]:
    """All of F_p^d in lexicographic order."""
    return list(itertools.product(range(p), repeat=d))


def coefficient_array(p: int, d: int) -> np.ndarray:
    """:func:`coefficient_vectors` as a ``(p**d, d)`` integer array."""
    return np.array(coefficient_vectors(p, d), dtype=np.int64).reshape(p**d, d)


def enumerate_subspace(v: Subspace) -> list[FpVector]:
    """All ``p**d`` elements of ``v``, ordered by their coefficient vectors."""
    if v.size > MAX_ENUMERATION:
        raise FieldError(f"refusing to enumerate {v.size} elements")
    p = v.ambient.p
    coeffs = coefficient_array(p, v.dim)
    elems = (coeffs @ v.basis_array()) % p
    return [tuple(int(x) for x in row) for row in elems]


def dual_kernel_contains(x: Sequence[int], v: Subspace) -> bool:
    """True iff ``x`` is orthogonal to every basis vector of ``v``."""
    return not any(signature(x, v))
