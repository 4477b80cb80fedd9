"""Acceptance suite: one pass/fail line per criterion, printed even under capture."""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from oracles import all_subspaces_as_sets, coupon_by_enumeration
from riplb.bounds import (
    claim2_lower,
    claim2_lower_rational,
    claim3_upper,
    coupon_exact,
    coupon_exact_rational,
    subspace_count,
    theorem_chain,
    theorem_chain_paper_ell,
    theorem_chain_simplified,
)
from riplb.family import SubspaceFamily, build_family, pair_with_intersection, random_subspace, verify_family
from riplb.field import FieldParams, intersection_dim
from riplb.fourier import MAX_SUPPORTS, fourier_submatrix, rip_epsilon
from riplb.montecarlo import (
    ExperimentConfig,
    boost_target,
    mc_boost_split,
    mc_family_failure,
    mc_pair_subspaces,
    mc_single_subspace,
)
from riplb.shattering import SampleSeq, kernel_certificate, shatters

pytestmark = pytest.mark.acceptance

TRIALS = 100_000


@pytest.fixture
def report(capsys):
    start = time.perf_counter()

    def emit(number: int, ok: bool, budget: float, detail: str):
        elapsed = time.perf_counter() - start
        ok = ok and elapsed <= budget
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail} ({elapsed:.1f}s, budget {budget:.0f}s)")
        assert ok, detail

    return emit


def test_certificate_soundness(report):
    rng = np.random.default_rng(1)
    pairs = unshattered = rip_checked = 0
    worst_res = 0.0
    worst_eps = math.inf
    while pairs < 10_000:
        p = int(rng.choice([2, 3]))
        n = int(rng.integers(1, 9))
        d = int(rng.integers(0, min(3, n) + 1))
        params = FieldParams(p, n)
        v = random_subspace(params, d, rng)
        k = v.size
        q = int(rng.integers(1, 2 * k + 2))
        seq = SampleSeq.from_indices(params, rng.integers(0, params.N, size=q))
        pairs += 1
        rep = shatters(seq, v)
        if rep.shattered:
            continue
        unshattered += 1
        cert = kernel_certificate(seq, v, rep)
        assert cert.k == k and len(set(cert.support)) == k
        res = float(np.linalg.norm(fourier_submatrix(seq.rows, cert.support, params) @ cert.coefficients))
        worst_res = max(worst_res, res / math.sqrt(q * k))
        if math.comb(params.N, k) <= MAX_SUPPORTS:
            rip_checked += 1
            worst_eps = min(worst_eps, rip_epsilon(seq, k, params).epsilon)
    ok = unshattered >= 1000 and worst_res <= 1e-9 and worst_eps >= 1 - 1e-9
    report(1, ok, 300, f"{pairs} pairs, {unshattered} unshattered, max residual/sqrt(qk) {worst_res:.2e}, "
                       f"{rip_checked} brute-force RIP checks, min epsilon {worst_eps:.12f}")


def test_claim2_domination(report):
    violations = 0
    for k in range(2, 65):
        for q in range(0, 20 * k + 1):
            if k <= 16:
                violations += claim2_lower_rational(k, q) > coupon_exact_rational(k, q)
            else:
                violations += claim2_lower(k, q).raw > coupon_exact(k, q) + 1e-12
    report(2, violations == 0, 60, f"claim2_lower <= coupon_exact on k in 2..64, q in 0..20k, {violations} violations")


def test_coupon_enumeration(report):
    bad = [(k, q) for k in range(1, 5) for q in range(0, 11) if coupon_exact_rational(k, q) != coupon_by_enumeration(k, q)]
    assert coupon_exact_rational(4, 10) == Fraction(28757, 131072)
    report(3, not bad, 60, f"exact coupon equals enumeration for k <= 4, q <= 10, mismatches {bad}")


def test_mc_single(report):
    s = mc_single_subspace(ExperimentConfig(2, 8, 4, 10, trials=TRIALS))
    exact = coupon_exact(4, 10)
    lower = claim2_lower(4, 10).raw
    ok = abs(s.estimate - exact) <= s.ci_halfwidth and s.estimate >= lower - s.ci_halfwidth
    report(4, ok, 60, f"estimate {s.estimate:.5f}, coupon {exact:.5f}, claim2 {lower:.5f}, ci {s.ci_halfwidth:.4f}")


def test_mc_pair(report):
    params = FieldParams(2, 6)
    v1, v2 = pair_with_intersection(params, 2, 1)
    assert v1.dim == v2.dim == 2 and intersection_dim(v1, v2) == 1
    s = mc_pair_subspaces(ExperimentConfig(2, 6, 4, 10, trials=TRIALS), v1, v2)
    upper = claim3_upper(2, 4, 1, 10).value
    ok = s.estimate - s.ci_halfwidth <= upper
    report(5, ok, 60, f"joint estimate {s.estimate:.5f}, ci {s.ci_halfwidth:.4f}, claim3 {upper:.5f}")


def test_mc_family(report):
    s = mc_family_failure(ExperimentConfig(2, 8, 4, 30, trials=TRIALS, ell=8, max_int_dim=1))
    fam = SubspaceFamily.from_dict(s.details["family"])
    chain = theorem_chain(4, 30, 8).raw
    identity = max(
        abs(theorem_chain_paper_ell(k, q).raw - theorem_chain_simplified(k, q))
        for k, q in [(4, 30), (4, 60), (9, 50), (16, 120), (64, 900)]
    )
    ok = (
        fam.size == 8
        and verify_family(fam)
        and (chain <= 0 or s.estimate + s.ci_halfwidth >= chain)
        and s.details["certificates_ok"]
        and identity <= 1e-12
    )
    report(6, ok, 120, f"estimate {s.estimate:.5f}, ci {s.ci_halfwidth:.4f}, chain {chain:.5f}, "
                       f"certificate residual {s.details['max_certificate_residual']:.1e}, identity gap {identity:.1e}")


def test_subspace_count(report):
    mismatches = []
    for p in (2, 3):
        for n in range(1, 5):
            levels = all_subspaces_as_sets(p, n)
            mismatches += [(p, n, d) for d in range(n + 1) if subspace_count(p, n, d) != len(levels[d])]
    fam = build_family(FieldParams(2, 4), 2, 1, 35, rng_seed=0)
    ok = not mismatches and subspace_count(2, 4, 2) == 35 and fam.size == 35 and verify_family(fam)
    report(7, ok, 60, f"Gaussian binomials match enumeration (mismatches {mismatches}), family of {fam.size} verified")


def test_boost(report):
    s = mc_boost_split(ExperimentConfig(2, 8, 4, 60, trials=TRIALS, ell=8, max_int_dim=1, split_s=2))
    d = s.details
    target = boost_target(d["estimate_a"], s.ci_halfwidth, 2)
    ok = d["estimate_b"] + s.ci_halfwidth >= target
    report(8, ok, 120, f"estimate_a {d['estimate_a']:.5f}, estimate_b {d['estimate_b']:.5f}, ci {s.ci_halfwidth:.4f}, target {target:.5f}")


def test_isometry_baseline(report):
    params = FieldParams(2, 4)
    full = SampleSeq.full(params)
    eps = {k: rip_epsilon(full, k, params, exhaustive=True).epsilon for k in (1, 2, 4)}
    ok = all(e < 1e-10 for e in eps.values())
    report(9, ok, 60, "full sample epsilons " + ", ".join(f"k={k}: {e:.1e}" for k, e in eps.items()))
