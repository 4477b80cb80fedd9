"""Closed-form probability bounds and exact combinatorial oracles.

Notation: ``k`` symbols (signatures of a ``d``-dimensional subspace, so
``k = p**d``), ``q`` uniform draws, ``ell`` subspaces in a family and ``m``
the dimension of a pairwise intersection.  Logarithms are natural unless a
base is named.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

PROBABILITY_KINDS = frozenset({"claim2_lower", "claim3_upper", "theorem_chain", "coupon_exact"})


@dataclass(frozen=True)
class BoundValue:
    """A formula evaluation.

    ``raw`` is the formula exactly as written; ``value`` is the same number
    capped at 1 for probability kinds (a bound above 1 says nothing more).
    """

    kind: str
    raw: float
    value: float = field(init=False)

    def __post_init__(self):
        v = min(self.raw, 1.0) if self.kind in PROBABILITY_KINDS else self.raw
        object.__setattr__(self, "value", v)

    @property
    def clamped(self) -> bool:
        return self.value != self.raw


def _log_p(k: int, p: int) -> float:
    """log base p of k, exact when k is a power of p."""
    d, x = 0, 1
    while x < k:
        x *= p
        d += 1
    return float(d) if x == k else math.log(k) / math.log(p)


def _check_kq(k: int, q: int, kmin: int = 1):
    if k < kmin:
        raise ValueError(f"k must be >= {kmin}, got {k}")
    if q < 0:
        raise ValueError(f"q must be >= 0, got {q}")


def coupon_exact_rational(k: int, q: int) -> Fraction:
    """Probability that ``q`` uniform draws from ``k`` symbols miss a symbol.

    Inclusion-exclusion over the set of missed symbols, evaluated exactly.
    """
    _check_kq(k, q)
    num = 0
    for j in range(1, k + 1):
        term = math.comb(k, j) * (k - j) ** q
        num += term if j % 2 else -term
    return Fraction(num, k**q)


def coupon_exact(k: int, q: int) -> float:
    """Float value of :func:`coupon_exact_rational`, correctly rounded.

    The alternating sum cancels catastrophically in floating point (the
    terms reach ``C(k, k/2)`` while the result is at most 1), so the sum is
    carried in integers and divided once.
    """
    return float(coupon_exact_rational(k, q))


def claim2_lower_rational(k: int, q: int) -> Fraction:
    _check_kq(k, q, 2)
    a = Fraction(k - 1, k) ** q
    b = Fraction(k - 2, k - 1) ** q
    return k * a * (1 - k * b)


def claim2_lower(k: int, q: int) -> BoundValue:
    """Single-subspace lower bound k(1-1/k)^q (1 - k(1-1/(k-1))^q)."""
    _check_kq(k, q, 2)
    raw = k * (1 - 1 / k) ** q * (1 - k * (1 - 1 / (k - 1)) ** q)
    return BoundValue("claim2_lower", raw)


def claim3_upper(p: int, k: int, m: int, q: int) -> BoundValue:
    """Joint non-shattering upper bound for two subspaces meeting in dimension ``m``:
    k^2 (1-1/k)^q exp(-q (k - p^m) / ((k-1) k)).
    """
    _check_kq(k, q, 2)
    pm = p**m
    if m < 0 or pm > k:
        raise ValueError(f"need 0 <= p**m <= k, got p**m={pm}, k={k}")
    raw = k * k * (1 - 1 / k) ** q * math.exp(-q * (k - pm) / ((k - 1) * k))
    return BoundValue("claim3_upper", raw)


def balanced_ell(k: int, q: int) -> float:
    """Family size exp(q/(k+sqrt k)) / (e k) used to simplify the union bound."""
    return math.exp(q / (k + math.sqrt(k))) / (math.e * k)


def theorem_chain(k: int, q: int, ell: float) -> BoundValue:
    """Second-order inclusion-exclusion lower bound for ``ell`` subspaces:
    ell k (1-1/k)^q (1 - k(1-1/(k-1))^q - ell k exp(-q/(k+sqrt k))).
    """
    _check_kq(k, q, 2)
    if ell <= 0:
        raise ValueError(f"ell must be positive, got {ell}")
    first = ell * k * (1 - 1 / k) ** q
    bracket = 1 - k * (1 - 1 / (k - 1)) ** q - ell * k * math.exp(-q / (k + math.sqrt(k)))
    return BoundValue("theorem_chain", first * bracket)


def theorem_chain_paper_ell(k: int, q: int) -> BoundValue:
    return theorem_chain(k, q, balanced_ell(k, q))


def chain_constant(k: int, q: int) -> float:
    """1 - 1/e - k(1-1/(k-1))^q, the constant left after substituting :func:`balanced_ell`."""
    return 1 - 1 / math.e - k * (1 - 1 / (k - 1)) ** q


def theorem_chain_simplified(k: int, q: int) -> float:
    """chain_constant * exp(q/(k+sqrt k) - 1) * (1-1/k)^q."""
    return chain_constant(k, q) * math.exp(q / (k + math.sqrt(k)) - 1) * (1 - 1 / k) ** q


def theorem_display_bound(k: int, q: int, c: float) -> float:
    """c exp(-q 2 sqrt(k) / (k^2 - k) - 1); ``c`` is supplied by the caller."""
    return c * math.exp(-q * 2 * math.sqrt(k) / (k * k - k) - 1)


def q_threshold_statement(p: int, N: int, k: int) -> float:
    """(k+sqrt k)((log_p k/2 + 1)(log N - 3 log 2k) + log k)."""
    return (k + math.sqrt(k)) * ((_log_p(k, p) / 2 + 1) * (math.log(N) - 3 * math.log(2 * k)) + math.log(k))


def q_threshold_proof(p: int, N: int, k: int) -> float:
    """As :func:`q_threshold_statement` with the extra ``+1`` inside the outer bracket."""
    return (k + math.sqrt(k)) * ((_log_p(k, p) / 2 + 1) * (math.log(N) - 3 * math.log(2 * k)) + 1 + math.log(k))


def boost_total_q(p: int, N: int, k: int) -> float:
    """Row budget shared by the ``s`` independent sequences in the boosting argument."""
    return (k + math.sqrt(k)) * ((_log_p(k, p) / 2 + 1) * (math.log(N) - math.log(2 * k)) + math.log(k))


def gaussian_binomial(n: int, d: int, p: int) -> int:
    if not 0 <= d <= n:
        raise ValueError(f"need 0 <= d <= n, got d={d}, n={n}")
    num = den = 1
    for i in range(d):
        num *= p ** (n - i) - 1
        den *= p ** (d - i) - 1
    return num // den


def subspace_count(p: int, n: int, d: int) -> int:
    """Number of ``d``-dimensional subspaces of F_p^n (exact)."""
    return gaussian_binomial(n, d, p)


def family_threshold(p: int, N: int, k: int) -> float:
    """(N/(2k^3))^(log_p(k)/2 + 1); below 1 the existence statement is vacuous."""
    if not 1 <= k <= N / 2:
        raise ValueError(f"need 1 <= k <= N/2, got k={k}, N={N}")
    return (N / (2 * k**3)) ** (_log_p(k, p) / 2 + 1)


def family_threshold_vacuous(p: int, N: int, k: int) -> bool:
    return family_threshold(p, N, k) < 1
