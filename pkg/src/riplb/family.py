"""Randomized greedy construction of subspace families with small pairwise intersections."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .field import FieldParams, Subspace, canonical_subspace, intersection_dim, rank, zero_subspace


@dataclass(frozen=True)
class SubspaceFamily:
    params: FieldParams
    dim: int
    max_int_dim: int
    members: tuple[Subspace, ...]
    exhausted: bool = False

    @property
    def size(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        return {
            "p": self.params.p,
            "n": self.params.n,
            "d": self.dim,
            "max_int_dim": self.max_int_dim,
            "members": [[list(row) for row in v.basis] for v in self.members],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "SubspaceFamily":
        params = FieldParams(int(doc["p"]), int(doc["n"]))
        members = []
        for basis in doc["members"]:
            if basis:
                members.append(canonical_subspace(np.array(basis, dtype=np.int64), params))
            else:
                members.append(zero_subspace(params))
        return cls(params, int(doc["d"]), int(doc["max_int_dim"]), tuple(members))

    @classmethod
    def from_json(cls, text: str) -> "SubspaceFamily":
        return cls.from_dict(json.loads(text))


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_subspace(params: FieldParams, d: int, rng_seed=None) -> Subspace:
    """Uniformly random ``d``-dimensional subspace of F_p^n.

    Vectors are drawn uniformly and kept when they leave the current span;
    every subspace has the same number of ordered bases, so the span is
    uniform.
    """
    if not 0 <= d <= params.n:
        raise ValueError(f"need 0 <= d <= n, got d={d}")
    rng = _rng(rng_seed)
    if d == 0:
        return zero_subspace(params)
    rows = np.zeros((0, params.n), dtype=np.int64)
    while rows.shape[0] < d:
        cand = rng.integers(0, params.p, size=(1, params.n))
        stacked = np.vstack([rows, cand])
        if rank(stacked, params) == stacked.shape[0]:
            rows = stacked
    return canonical_subspace(rows, params)


def build_family(params: FieldParams, d: int, max_int_dim: int | None = None, target_size: int = 1,
                 rng_seed=None, max_attempts: int | None = None) -> SubspaceFamily:
    """Greedy search for ``target_size`` subspaces with pairwise intersections of
    dimension at most ``max_int_dim`` (default ``d // 2``).

    Stops after ``max_attempts`` candidates (default ``1000 * target_size``);
    a short family comes back with ``exhausted=True``.
    """
    if max_int_dim is None:
        max_int_dim = d // 2
    if max_int_dim < 0:
        raise ValueError("max_int_dim must be >= 0")
    if target_size < 1:
        raise ValueError("target_size must be >= 1")
    if max_attempts is None:
        max_attempts = 1000 * target_size
    rng = _rng(rng_seed)
    members: list[Subspace] = []
    attempts = 0
    while len(members) < target_size and attempts < max_attempts:
        attempts += 1
        cand = random_subspace(params, d, rng)
        if cand not in members and all(intersection_dim(cand, v) <= max_int_dim for v in members):
            members.append(cand)
    return SubspaceFamily(params, d, max_int_dim, tuple(members), exhausted=len(members) < target_size)


def verify_family(family: SubspaceFamily) -> bool:
    """Recheck dimensions and every pairwise intersection from scratch."""
    members = family.members
    if any(v.ambient != family.params or v.dim != family.dim for v in members):
        return False
    if len(set(members)) != len(members):
        return False
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if intersection_dim(members[i], members[j]) > family.max_int_dim:
                return False
    return True


def pair_with_intersection(params: FieldParams, d: int, m: int) -> tuple[Subspace, Subspace]:
    """span{e_1..e_d} and span{e_{d-m+1}..e_{2d-m}}, which meet in dimension ``m``."""
    if not 0 <= m <= d or 2 * d - m > params.n:
        raise ValueError(f"cannot place two {d}-dim subspaces meeting in dim {m} inside F_p^{params.n}")
    v1 = canonical_subspace(np.array([params.unit(i) for i in range(d)], dtype=np.int64).reshape(d, params.n), params)
    v2 = canonical_subspace(np.array([params.unit(i) for i in range(d - m, 2 * d - m)], dtype=np.int64).reshape(d, params.n), params)
    return v1, v2
