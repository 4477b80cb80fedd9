"""Monte Carlo experiments comparing shattering frequencies with the closed-form bounds.

Rows are drawn uniformly with replacement.  Trial ``i`` draws its rows from
``numpy.random.default_rng([master_seed, i])`` so every estimate is a
function of the configuration alone, whatever the block size or order in
which trials are evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds
from .bounds import BoundValue
from .family import SubspaceFamily, build_family, verify_family
from .field import FieldParams, Subspace, coordinate_subspace, intersection_dim, signature_codes
from .fourier import fourier_submatrix
from .shattering import SampleSeq, kernel_certificate, shatters

CONFIDENCE = 0.99
CERTIFICATE_TOL = 1e-9
ASYMPTOTIC_NOTE = (
    "desk-scale run: compares against the exact finite formulas; "
    "the asymptotic regime k = Omega(log^2 N) is not reached"
)
DEFAULT_BLOCK = 4096


class ConfigError(ValueError):
    pass


def hoeffding_halfwidth(trials: int, confidence: float = CONFIDENCE) -> float:
    """Two-sided Hoeffding half-width sqrt(ln(2/alpha) / (2 trials))."""
    return math.sqrt(math.log(2 / (1 - confidence)) / (2 * trials))


def _power_of(k: int, p: int) -> int | None:
    d, x = 0, 1
    while x < k:
        x *= p
        d += 1
    return d if x == k else None


@dataclass
class ExperimentConfig:
    p: int
    n: int
    k: int
    q: int
    trials: int = 100_000
    master_seed: int = 0
    family: SubspaceFamily | None = None
    ell: int = 1
    max_int_dim: int | None = None
    split_s: int = 1
    spot_checks: int = 20

    def __post_init__(self):
        self.params = FieldParams(self.p, self.n)
        d = _power_of(self.k, self.p)
        if d is None:
            raise ConfigError(f"k={self.k} is not a power of p={self.p}")
        if d > self.n:
            raise ConfigError(f"k={self.k} needs d={d} > n={self.n}")
        self.d = d
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.q < 0:
            raise ConfigError("q must be >= 0")
        if self.master_seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.ell < 1:
            raise ConfigError("ell must be >= 1")
        if self.split_s < 1:
            raise ConfigError("split_s must be >= 1")

    def resolved_family(self) -> SubspaceFamily:
        """The configured family, or one built greedily from ``ell``/``max_int_dim``."""
        if self.family is not None:
            return self.family
        max_int = self.d // 2 if self.max_int_dim is None else self.max_int_dim
        if self.ell == 1:
            return SubspaceFamily(self.params, self.d, max_int, (coordinate_subspace(self.params, self.d),))
        fam = build_family(self.params, self.d, max_int, self.ell, rng_seed=[self.master_seed, 2**31])
        if fam.exhausted:
            raise ConfigError(f"could only build {fam.size} of {self.ell} subspaces")
        return fam


@dataclass
class TrialSummary:
    """Monte Carlo estimate with its 99% Hoeffding half-width and the bound it was held to.

    ``verdict`` is recomputable from the other fields through :meth:`recheck`.
    """

    experiment: str
    config: ExperimentConfig
    estimate: float
    ci_halfwidth: float
    bound_values: dict[str, BoundValue]
    primary_bound: str
    verdict: bool
    details: dict = field(default_factory=dict)

    @property
    def trials(self) -> int:
        return self.config.trials

    def recheck(self) -> bool:
        return _VERDICTS[self.experiment](self)

    def csv_row(self) -> dict:
        b = self.bound_values[self.primary_bound]
        c = self.config
        return {
            "experiment": self.experiment,
            "p": c.p,
            "n": c.n,
            "k": c.k,
            "q": c.q,
            "trials": c.trials,
            "seed": c.master_seed,
            "estimate": repr(self.estimate),
            "ci99": repr(self.ci_halfwidth),
            "bound_kind": b.kind,
            "bound_value": repr(b.raw),
            "verdict": "pass" if self.verdict else "fail",
        }

    def to_dict(self) -> dict:
        out = self.csv_row()
        out["estimate"] = self.estimate
        out["ci99"] = self.ci_halfwidth
        out["bound_value"] = self.bound_values[self.primary_bound].raw
        out["bounds"] = {name: {"kind": b.kind, "raw": b.raw, "value": b.value} for name, b in self.bound_values.items()}
        out["details"] = self.details
        out["note"] = ASYMPTOTIC_NOTE
        return out


def sample_rows(N: int, q: int, master_seed: int, start: int, stop: int) -> np.ndarray:
    """Row indices for trials ``start..stop-1``, shape ``(stop - start, q)``."""
    out = np.empty((stop - start, q), dtype=np.int64)
    for t in range(start, stop):
        out[t - start] = np.random.default_rng([master_seed, t]).integers(0, N, size=q)
    return out


def unshattered(row_digits: np.ndarray, v: Subspace) -> np.ndarray:
    """Per-trial flags: True where the trial's rows miss some signature of ``v``.

    ``row_digits`` has shape ``(trials, q, n)``.
    """
    trials, q = row_digits.shape[:2]
    k = v.size
    if q == 0:
        return np.ones(trials, dtype=bool)
    codes = signature_codes(row_digits, v)
    hit = np.zeros((trials, k), dtype=bool)
    hit[np.arange(trials)[:, None], codes] = True
    return ~hit.all(axis=1)


def _blocks(config: ExperimentConfig, block: int):
    for start in range(0, config.trials, block):
        stop = min(start + block, config.trials)
        idx = sample_rows(config.params.N, config.q, config.master_seed, start, stop)
        yield start, idx, config.params.digits(idx)


def mc_single_subspace(config: ExperimentConfig, subspace: Subspace | None = None, *, block: int = DEFAULT_BLOCK) -> TrialSummary:
    """Frequency with which Q fails to shatter one fixed subspace of dimension d."""
    v = coordinate_subspace(config.params, config.d) if subspace is None else subspace
    if v.dim != config.d or v.ambient != config.params:
        raise ConfigError("subspace does not match the configuration")
    count = 0
    for _, _, digits in _blocks(config, block):
        count += int(unshattered(digits, v).sum())
    est = count / config.trials
    bv = {"coupon_exact": BoundValue("coupon_exact", bounds.coupon_exact(config.k, config.q))}
    if config.k >= 2:
        bv["claim2_lower"] = bounds.claim2_lower(config.k, config.q)
    primary = "claim2_lower" if config.k >= 2 else "coupon_exact"
    s = TrialSummary("mc_single", config, est, hoeffding_halfwidth(config.trials), bv, primary, False,
                     {"subspace": [list(r) for r in v.basis]})
    s.verdict = s.recheck()
    return s


def _verdict_single(s: TrialSummary) -> bool:
    ok = abs(s.estimate - s.bound_values["coupon_exact"].raw) <= s.ci_halfwidth
    if "claim2_lower" in s.bound_values:
        ok = ok and s.estimate + s.ci_halfwidth >= s.bound_values["claim2_lower"].raw
    return ok


def mc_pair_subspaces(config: ExperimentConfig, v1: Subspace, v2: Subspace, *, block: int = DEFAULT_BLOCK) -> TrialSummary:
    """Frequency with which Q shatters neither ``v1`` nor ``v2``."""
    if v1.dim != config.d or v2.dim != config.d:
        raise ConfigError(f"both subspaces must have dimension d={config.d}")
    if v1.ambient != config.params or v2.ambient != config.params:
        raise ConfigError("subspaces do not live in the configured ambient space")
    if config.k < 2:
        raise ConfigError("the joint bound needs k >= 2")
    m = intersection_dim(v1, v2)
    both = first = second = 0
    for _, _, digits in _blocks(config, block):
        a = unshattered(digits, v1)
        b = unshattered(digits, v2)
        both += int((a & b).sum())
        first += int(a.sum())
        second += int(b.sum())
    T = config.trials
    bv = {
        "claim3_upper": bounds.claim3_upper(config.p, config.k, m, config.q),
        "coupon_exact": BoundValue("coupon_exact", bounds.coupon_exact(config.k, config.q)),
    }
    details = {
        "m": m,
        "marginal_1": first / T,
        "marginal_2": second / T,
        "independent_product": bounds.coupon_exact(config.k, config.q) ** 2,
    }
    s = TrialSummary("mc_pair", config, both / T, hoeffding_halfwidth(T), bv, "claim3_upper", False, details)
    s.verdict = s.recheck()
    return s


def _verdict_pair(s: TrialSummary) -> bool:
    return s.estimate - s.ci_halfwidth <= s.bound_values["claim3_upper"].value


def _check_family(config: ExperimentConfig) -> SubspaceFamily:
    fam = config.resolved_family()
    if fam.params != config.params or fam.dim != config.d:
        raise ConfigError("family does not match the configured p, n, k")
    if fam.max_int_dim > config.d // 2:
        raise ConfigError(f"family intersection cap {fam.max_int_dim} exceeds floor(d/2) = {config.d // 2}")
    if not verify_family(fam):
        raise ConfigError("family failed verification")
    return fam


def _any_unshattered(digits: np.ndarray, fam: SubspaceFamily) -> np.ndarray:
    out = np.zeros(digits.shape[0], dtype=bool)
    for v in fam.members:
        out |= unshattered(digits, v)
    return out


def certificate_residual(rows: SampleSeq, v: Subspace) -> float | None:
    """Norm of A_{Q,.} applied to the kernel certificate for ``v``; None if Q shatters ``v``."""
    report = shatters(rows, v)
    if report.shattered:
        return None
    cert = kernel_certificate(rows, v, report)
    if rows.q == 0:
        return 0.0
    return float(np.linalg.norm(fourier_submatrix(rows.rows, cert.support, rows.params) @ cert.coefficients))


def mc_family_failure(config: ExperimentConfig, *, block: int = DEFAULT_BLOCK) -> TrialSummary:
    """Frequency with which Q fails to shatter some member of a low-intersection family.

    The first ``config.spot_checks`` failing trials are re-run exactly and
    their kernel certificates checked against the sampled Fourier rows.
    """
    fam = _check_family(config)
    if config.k < 2:
        raise ConfigError("the family bound needs k >= 2")
    count = 0
    failing: list[np.ndarray] = []
    for _, idx, digits in _blocks(config, block):
        bad = _any_unshattered(digits, fam)
        count += int(bad.sum())
        need = config.spot_checks - len(failing)
        if need > 0:
            failing.extend(idx[np.flatnonzero(bad)[:need]])
    tol = CERTIFICATE_TOL * math.sqrt(config.q * config.k)
    residuals = []
    for rows_idx in failing:
        rows = SampleSeq.from_indices(config.params, rows_idx)
        res = [certificate_residual(rows, v) for v in fam.members]
        residuals.append(max(r for r in res if r is not None))
    T = config.trials
    bv = {"theorem_chain": bounds.theorem_chain(config.k, config.q, fam.size)}
    details = {
        "ell": fam.size,
        "max_int_dim": fam.max_int_dim,
        "family": fam.to_dict(),
        "certificates_checked": len(residuals),
        "max_certificate_residual": max(residuals, default=0.0),
        "certificate_tolerance": tol,
        "certificates_ok": all(r <= tol for r in residuals),
    }
    s = TrialSummary("mc_family", config, count / T, hoeffding_halfwidth(T), bv, "theorem_chain", False, details)
    s.verdict = s.recheck()
    return s


def _verdict_family(s: TrialSummary) -> bool:
    b = s.bound_values["theorem_chain"].raw
    ok = b <= 0 or s.estimate + s.ci_halfwidth >= b
    return ok and s.details["certificates_ok"]


def mc_boost_split(config: ExperimentConfig, *, block: int = DEFAULT_BLOCK) -> TrialSummary:
    """Compare failure of the full sequence with failure of its first of ``s`` chunks.

    If the full sequence misses a signature of some member, so does every
    chunk, and chunks are independent; hence Pr[chunk fails] >=
    Pr[full fails]**(1/s).
    """
    s_chunks = config.split_s
    if config.q % s_chunks:
        raise ConfigError(f"q={config.q} is not divisible by split_s={s_chunks}")
    if config.k < 2:
        raise ConfigError("the family bound needs k >= 2")
    fam = _check_family(config)
    chunk = config.q // s_chunks
    full = first = 0
    for _, _, digits in _blocks(config, block):
        full += int(_any_unshattered(digits, fam).sum())
        first += int(_any_unshattered(digits[:, :chunk], fam).sum())
    T = config.trials
    bv = {
        "theorem_chain_full": bounds.theorem_chain(config.k, config.q, fam.size),
        "theorem_chain_chunk": bounds.theorem_chain(config.k, chunk, fam.size),
    }
    est_a = full / T
    est_b = first / T
    details = {"ell": fam.size, "split_s": s_chunks, "chunk_q": chunk, "estimate_a": est_a, "estimate_b": est_b}
    s = TrialSummary("mc_boost", config, est_b, hoeffding_halfwidth(T), bv, "theorem_chain_chunk", False, details)
    s.verdict = s.recheck()
    return s


def boost_target(est_a: float, ci: float, s: int) -> float:
    return max(est_a - ci, 0.0) ** (1 / s)


def _verdict_boost(s: TrialSummary) -> bool:
    d = s.details
    return d["estimate_b"] + s.ci_halfwidth >= boost_target(d["estimate_a"], s.ci_halfwidth, d["split_s"])


_VERDICTS = {
    "mc_single": _verdict_single,
    "mc_pair": _verdict_pair,
    "mc_family": _verdict_family,
    "mc_boost": _verdict_boost,
}
