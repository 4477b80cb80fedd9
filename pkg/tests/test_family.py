import json

import numpy as np
import pytest

from oracles import all_subspaces_as_sets
from riplb.family import (
    SubspaceFamily,
    build_family,
    pair_with_intersection,
    random_subspace,
    verify_family,
)
from riplb.field import FieldParams, coordinate_subspace, enumerate_subspace, intersection_dim, zero_subspace


def test_random_subspace_extremes():
    params = FieldParams(3, 3)
    for seed in range(5):
        full = random_subspace(params, 3, seed)
        assert full.dim == 3 and len(enumerate_subspace(full)) == 27
        assert random_subspace(params, 0, seed) == zero_subspace(params)
    with pytest.raises(ValueError):
        random_subspace(params, 4, 0)


def test_random_subspace_uniform_over_35():
    params = FieldParams(2, 4)
    targets = {s for s in all_subspaces_as_sets(2, 4)[2]}
    assert len(targets) == 35
    rng = np.random.default_rng(7)
    counts = {}
    draws = 35_000
    for _ in range(draws):
        v = random_subspace(params, 2, rng)
        counts[v] = counts.get(v, 0) + 1
    assert {frozenset(enumerate_subspace(v)) for v in counts} == targets
    expected = draws / 35
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    # 99% quantile of chi-square with 34 degrees of freedom
    assert chi2 < 56.06


def test_single_member_family():
    fam = build_family(FieldParams(2, 5), 2, 1, 1, rng_seed=3)
    assert fam.size == 1 and not fam.exhausted
    assert verify_family(fam)


def test_all_35_subspaces_qualify():
    params = FieldParams(2, 4)
    fam = build_family(params, 2, 1, 35, rng_seed=11)
    assert fam.size == 35 and not fam.exhausted
    assert verify_family(fam)
    members = fam.members
    assert all(intersection_dim(a, b) <= 1 for i, a in enumerate(members) for b in members[i + 1:])


def test_exhaustion_is_reported():
    params = FieldParams(2, 4)
    fam = build_family(params, 2, 1, 36, rng_seed=1, max_attempts=2000)
    assert fam.size == 35 and fam.exhausted
    assert verify_family(fam)


def test_family_with_default_cap_in_f2_6():
    params = FieldParams(2, 6)
    fam = build_family(params, 2, None, 20, rng_seed=5)
    assert fam.max_int_dim == 1
    assert fam.size == 20 and verify_family(fam)


def test_build_is_deterministic():
    params = FieldParams(3, 4)
    a = build_family(params, 2, 1, 10, rng_seed=42)
    b = build_family(params, 2, 1, 10, rng_seed=42)
    assert a.members == b.members


def test_duplicates_fail_verification():
    params = FieldParams(2, 4)
    v = coordinate_subspace(params, 2)
    assert not verify_family(SubspaceFamily(params, 2, 1, (v, v)))
    # an uncapped family still rejects duplicates
    assert not verify_family(SubspaceFamily(params, 2, 2, (v, v)))


def test_wrong_dimension_fails_verification():
    params = FieldParams(2, 4)
    fam = SubspaceFamily(params, 2, 1, (coordinate_subspace(params, 2), coordinate_subspace(params, 1)))
    assert not verify_family(fam)


def test_large_intersection_fails_verification():
    params = FieldParams(2, 6)
    v1, v2 = pair_with_intersection(params, 3, 2)
    assert intersection_dim(v1, v2) == 2
    assert not verify_family(SubspaceFamily(params, 3, 1, (v1, v2)))


def test_json_round_trip():
    params = FieldParams(3, 4)
    fam = build_family(params, 2, 1, 6, rng_seed=9)
    doc = json.loads(fam.to_json())
    assert set(doc) == {"p", "n", "d", "max_int_dim", "members"}
    assert all(isinstance(x, int) for basis in doc["members"] for row in basis for x in row)
    back = SubspaceFamily.from_json(fam.to_json())
    assert back.members == fam.members and back.dim == 2 and back.max_int_dim == 1


@pytest.mark.parametrize("d,m", [(2, 0), (2, 1), (3, 1), (2, 2)])
def test_pair_with_intersection(d, m):
    params = FieldParams(3, 6)
    v1, v2 = pair_with_intersection(params, d, m)
    assert v1.dim == v2.dim == d
    assert intersection_dim(v1, v2) == m
