"""Shattering tests and explicit sparse kernel certificates.

A row sequence Q shatters a subspace V when the signatures of Q's rows cover
all of F_p^d.  When some signature ``w`` is missed, the vector supported on
the elements of V with coefficient ``omega**(-<w, c>)`` at the element with
coefficient vector ``c`` is annihilated by every sampled Fourier row, which
rules out the restricted isometry property at sparsity ``p**d``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .field import (
    FieldError,
    FieldParams,
    FpVector,
    Signature,
    Subspace,
    coefficient_array,
    enumerate_subspace,
    signature_codes,
)


@dataclass(frozen=True)
class SampleSeq:
    """An ordered sequence of sampled rows (duplicates allowed)."""

    params: FieldParams
    rows: tuple[FpVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.params.vector(r) for r in self.rows))

    @property
    def q(self) -> int:
        return len(self.rows)

    @classmethod
    def from_indices(cls, params: FieldParams, indices: Sequence[int]) -> "SampleSeq":
        return cls(params, tuple(params.from_index(int(i)) for i in indices))

    @classmethod
    def full(cls, params: FieldParams) -> "SampleSeq":
        """Every element of F_p^n once, in index order."""
        return cls.from_indices(params, range(params.N))

    def as_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.q, self.params.n)

    def indices(self) -> list[int]:
        return [self.params.index(r) for r in self.rows]

    def extend(self, more: Sequence[Sequence[int]]) -> "SampleSeq":
        return SampleSeq(self.params, self.rows + tuple(tuple(r) for r in more))


@dataclass(frozen=True)
class ShatterReport:
    subspace: Subspace
    shattered: bool
    missing: Signature | None = None

    def __post_init__(self):
        if self.shattered != (self.missing is None):
            raise ValueError("shattered must hold exactly when no signature is missing")


@dataclass(frozen=True)
class SparseCertificate:
    """A ``k``-sparse unit-modulus vector annihilated by the sampled rows."""

    support: tuple[FpVector, ...]
    coefficients: np.ndarray

    @property
    def k(self) -> int:
        return len(self.support)

    def dense(self, params: FieldParams) -> np.ndarray:
        """The certificate as a length-N vector indexed like the Fourier columns."""
        v = np.zeros(params.N, dtype=complex)
        for s, c in zip(self.support, self.coefficients):
            v[params.index(s)] = c
        return v


def _decode(code: int, p: int, d: int) -> Signature:
    out = []
    for _ in range(d):
        code, c = divmod(code, p)
        out.append(c)
    return tuple(reversed(out))


def shatters(q_seq: SampleSeq, v: Subspace) -> ShatterReport:
    """Test whether ``q_seq`` shatters ``v``.

    On failure the report carries the lexicographically smallest signature
    not attained by any row.  The zero subspace needs at least one row.
    """
    if q_seq.params != v.ambient:
        raise FieldError(f"ambient mismatch: {q_seq.params} vs {v.ambient}")
    p, d = v.ambient.p, v.dim
    k = v.size
    hit = np.zeros(k, dtype=bool)
    if q_seq.q:
        hit[signature_codes(q_seq.as_array(), v)] = True
    missed = np.flatnonzero(~hit)
    if missed.size == 0:
        return ShatterReport(v, True)
    return ShatterReport(v, False, _decode(int(missed[0]), p, d))


def kernel_certificate(q_seq: SampleSeq, v: Subspace, report: ShatterReport) -> SparseCertificate:
    """Build the sparse vector on ``v`` killed by every row of ``q_seq``."""
    if report.shattered:
        raise ValueError("a shattered subspace admits no certificate")
    if report.subspace != v:
        raise ValueError("report was computed for a different subspace")
    p, d = v.ambient.p, v.dim
    w = np.array(report.missing, dtype=np.int64)
    coeffs = coefficient_array(p, d)
    phase = (-(coeffs @ w)) % p
    if p == 2:
        values = np.where(phase == 0, 1.0, -1.0).astype(complex)
    else:
        values = np.exp(2j * np.pi * phase / p)
    return SparseCertificate(tuple(enumerate_subspace(v)), values)


def character_sum(a: Sequence[int], w: Sequence[int], p: int) -> complex:
    """Sum over c in F_p^d of omega**<a - w, c>."""
    d = len(a)
    diff = [(x - y) % p for x, y in zip(a, w)]
    total = 0j
    for c in itertools.product(range(p), repeat=d):
        total += np.exp(2j * np.pi * (sum(x * y for x, y in zip(diff, c)) % p) / p)
    return total
