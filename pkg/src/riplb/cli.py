"""Command-line entry point.

Exit codes: 0 success or passing verdict, 1 failing verdict, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import bounds
from .family import SubspaceFamily, build_family, pair_with_intersection, verify_family
from .field import FieldError, FieldParams, canonical_subspace, coordinate_subspace, is_prime
from .fourier import GuardExceeded, fourier_submatrix, rip_epsilon
from .montecarlo import (
    ASYMPTOTIC_NOTE,
    ConfigError,
    ExperimentConfig,
    mc_boost_split,
    mc_family_failure,
    mc_pair_subspaces,
    mc_single_subspace,
    sample_rows,
)
from .shattering import SampleSeq, kernel_certificate, shatters

CSV_FIELDS = ["experiment", "p", "n", "k", "q", "trials", "seed", "estimate", "ci99", "bound_kind", "bound_value", "verdict"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_vectors(text: str) -> list[list[int]]:
    """'1,0,1;0,1,1' -> [[1,0,1],[0,1,1]]."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            out.append([int(x) for x in chunk.split(",")])
    return out


def _common(p: argparse.ArgumentParser):
    p.add_argument("--p", type=int, required=True, help="prime modulus")
    p.add_argument("--n", type=int, default=None, help="ambient dimension")
    p.add_argument("--k", type=int, default=None, help="sparsity / coupon count, a power of p")
    p.add_argument("--q", type=int, default=None, help="number of sampled rows")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ell", type=int, default=None, help="family size")
    p.add_argument("--max-int-dim", type=int, default=None)
    p.add_argument("--split-s", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.add_argument("--out", type=Path, default=None)


def _subspace_args(p: argparse.ArgumentParser):
    p.add_argument("--rows", default=None, help="explicit rows, e.g. '0,0;0,1'")
    p.add_argument("--all-rows", action="store_true", help="use every element of F_p^n once")
    p.add_argument("--basis", default=None, help="spanning vectors of V, e.g. '1,0;0,1' (default span{e_1..e_d})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="riplb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    specs = {
        "bounds": "evaluate the closed-form bounds and exact oracles",
        "shatter-check": "test whether a row sequence shatters a subspace",
        "certificate": "build the sparse kernel certificate for a non-shattered subspace",
        "rip-bruteforce": "brute-force RIP constant of the normalized sample matrix",
        "family-build": "greedily build a low-intersection subspace family",
        "mc-single": "Monte Carlo: single-subspace non-shattering vs the coupon oracle",
        "mc-pair": "Monte Carlo: joint non-shattering of two subspaces",
        "mc-family": "Monte Carlo: some family member unshattered vs the union chain bound",
        "mc-boost": "Monte Carlo: chunk failure vs full-sequence failure",
    }
    subs = {}
    for name, help_ in specs.items():
        sp = sub.add_parser(name, help=help_)
        _common(sp)
        subs[name] = sp
    subs["bounds"].add_argument("--m", type=int, default=None, help="intersection dimension for the pair bound")
    for name in ("shatter-check", "certificate", "rip-bruteforce"):
        _subspace_args(subs[name])
    subs["mc-pair"].add_argument("--m", type=int, default=None, help="intersection dimension of the pair (default floor(d/2))")
    subs["mc-pair"].add_argument("--basis", default=None)
    subs["mc-pair"].add_argument("--basis2", default=None)
    for name in ("mc-family", "mc-boost"):
        subs[name].add_argument("--family-json", type=Path, default=None, help="load a family instead of building one")
    for name in ("mc-family", "mc-boost", "certificate"):
        subs[name].add_argument("--spot-checks", type=int, default=20)
    return parser


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} requires {', '.join(missing)}")


def _params(args) -> FieldParams:
    _require(args, "n")
    return FieldParams(args.p, args.n)


def _dim_of(k: int, p: int) -> int:
    d, x = 0, 1
    while x < k:
        x *= p
        d += 1
    if x != k:
        raise UsageError(f"k={k} is not a power of p={p}")
    return d


def _subspace(args, params: FieldParams, text: str | None = None):
    text = args.basis if text is None else text
    if text:
        vecs = _parse_vectors(text)
        return canonical_subspace(np.array([params.vector(v) for v in vecs], dtype=np.int64), params)
    _require(args, "k")
    return coordinate_subspace(params, _dim_of(args.k, args.p))


def _sample(args, params: FieldParams) -> SampleSeq:
    if args.all_rows:
        return SampleSeq.full(params)
    if args.rows is not None:
        return SampleSeq(params, tuple(tuple(r) for r in _parse_vectors(args.rows)))
    _require(args, "q")
    return SampleSeq.from_indices(params, sample_rows(params.N, args.q, args.seed, 0, 1)[0])


def _emit(args, records: list[dict], extra: dict | None = None):
    if args.out is None and args.format is None:
        return
    fmt = args.format or ("json" if args.out and args.out.suffix == ".json" else "csv")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", restval="")
        w.writeheader()
        for rec in records:
            w.writerow(rec)
        text = buf.getvalue()
    else:
        doc = {"records": records, "note": ASYMPTOTIC_NOTE}
        if extra:
            doc.update(extra)
        text = json.dumps(doc, indent=2, default=_jsonable) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text)
        print(f"wrote {args.out}")


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"cannot serialize {type(x)}")


def _base_record(args, experiment: str) -> dict:
    return {"experiment": experiment, "p": args.p, "n": args.n, "k": args.k, "q": args.q, "seed": args.seed}


def cmd_bounds(args) -> int:
    _require(args, "k", "q")
    k, q, p = args.k, args.q, args.p
    d = _dim_of(k, p)
    records = []

    def row(kind, value):
        print(f"{kind:<22} {value!r}")
        rec = _base_record(args, "bounds")
        rec.update(bound_kind=kind, bound_value=repr(value))
        records.append(rec)

    row("coupon_exact", bounds.coupon_exact(k, q))
    if k >= 2:
        row("claim2_lower", bounds.claim2_lower(k, q).raw)
        m = d // 2 if args.m is None else args.m
        row("claim3_upper", bounds.claim3_upper(p, k, m, q).raw)
        print(f"  (claim3_upper with m={m})")
        if args.ell is not None:
            row("theorem_chain", bounds.theorem_chain(k, q, args.ell).raw)
        row("theorem_chain_paper_ell", bounds.theorem_chain_paper_ell(k, q).raw)
    if args.n is not None:
        N = p**args.n
        row("subspace_count", bounds.subspace_count(p, args.n, d))
        if k <= N / 2:
            thr = bounds.family_threshold(p, N, k)
            row("family_threshold", thr)
            if thr < 1:
                print("  family_threshold < 1: the existence statement is vacuous here")
            if k >= 2:
                row("q_threshold_statement", bounds.q_threshold_statement(p, N, k))
                row("q_threshold_proof", bounds.q_threshold_proof(p, N, k))
    _emit(args, records)
    return 0


def cmd_shatter_check(args) -> int:
    params = _params(args)
    v = _subspace(args, params)
    qs = _sample(args, params)
    report = shatters(qs, v)
    print(f"subspace basis: {[list(r) for r in v.basis]} (dim {v.dim}, k={v.size})")
    print(f"rows: {qs.q}")
    print(f"shattered: {str(report.shattered).lower()}")
    if not report.shattered:
        print(f"missing signature: {list(report.missing)}")
    rec = _base_record(args, "shatter-check")
    rec.update(k=v.size, q=qs.q, verdict="shattered" if report.shattered else "not-shattered")
    _emit(args, [rec], {"shattered": report.shattered, "missing": report.missing,
                        "basis": [list(r) for r in v.basis], "rows": [list(r) for r in qs.rows]})
    return 0


def cmd_certificate(args) -> int:
    params = _params(args)
    v = _subspace(args, params)
    qs = _sample(args, params)
    report = shatters(qs, v)
    if report.shattered:
        print("shattered: true; no kernel certificate exists for this subspace")
        return 1
    cert = kernel_certificate(qs, v, report)
    residual = 0.0
    if qs.q:
        residual = float(np.linalg.norm(fourier_submatrix(qs.rows, cert.support, params) @ cert.coefficients))
    tol = 1e-9 * (qs.q * cert.k) ** 0.5
    ok = residual <= tol
    print(f"missing signature: {list(report.missing)}")
    print(f"certificate: {cert.k}-sparse")
    for s, c in zip(cert.support, cert.coefficients):
        print(f"  {list(s)}  {c.real:+.12f}{c.imag:+.12f}j")
    print(f"||A_Q v||_2 = {residual:.3e} (tolerance {tol:.3e}) -> {'ok' if ok else 'FAILED'}")
    rec = _base_record(args, "certificate")
    rec.update(k=cert.k, q=qs.q, estimate=repr(residual), bound_kind="residual_tolerance",
               bound_value=repr(tol), verdict="pass" if ok else "fail")
    _emit(args, [rec], {"certificate": {"support": [list(s) for s in cert.support],
                                        "coefficients": [[c.real, c.imag] for c in cert.coefficients]}})
    return 0 if ok else 1


def cmd_rip_bruteforce(args) -> int:
    params = _params(args)
    _require(args, "k")
    qs = _sample(args, params)
    if qs.q == 0:
        raise UsageError("rip-bruteforce needs at least one row")
    est = rip_epsilon(qs, args.k, params)
    print(f"k={est.k} rows={qs.q} supports scanned={est.supports_checked}")
    print(f"epsilon = {est.epsilon!r}")
    print(f"witness support: {[list(s) for s in est.witness_support]}")
    print(f"smallest Gram eigenvalue {est.min_eigenvalue:.3e}, largest {est.max_eigenvalue:.6f}")
    rec = _base_record(args, "rip-bruteforce")
    rec.update(q=qs.q, estimate=repr(est.epsilon), bound_kind="rip_epsilon")
    _emit(args, [rec], {"witness_support": [list(s) for s in est.witness_support],
                        "min_eigenvalue": est.min_eigenvalue, "max_eigenvalue": est.max_eigenvalue})
    return 0


def cmd_family_build(args) -> int:
    params = _params(args)
    _require(args, "k", "ell")
    d = _dim_of(args.k, args.p)
    fam = build_family(params, d, args.max_int_dim, args.ell, rng_seed=args.seed)
    ok = verify_family(fam)
    print(f"built {fam.size}/{args.ell} subspaces of dim {d} with pairwise intersection <= {fam.max_int_dim}")
    print(f"verified: {str(ok).lower()}{' (search exhausted)' if fam.exhausted else ''}")
    if args.k <= params.N / 2:
        thr = bounds.family_threshold(args.p, params.N, args.k)
        print(f"existence threshold (N/(2k^3))^(d/2+1) = {thr:.6g}{' (vacuous)' if thr < 1 else ''}")
    rec = _base_record(args, "family-build")
    rec.update(estimate=fam.size, bound_kind="target_size", bound_value=args.ell,
               verdict="pass" if ok and not fam.exhausted else "fail")
    if args.out is not None and (args.format == "json" or (args.format is None and args.out.suffix == ".json")):
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(fam.to_json(indent=2) + "\n")
        print(f"wrote {args.out}")
    else:
        _emit(args, [rec])
    return 0 if ok and not fam.exhausted else 1


def _config(args, **extra) -> ExperimentConfig:
    _require(args, "n", "k", "q")
    return ExperimentConfig(p=args.p, n=args.n, k=args.k, q=args.q, trials=args.trials, master_seed=args.seed,
                            ell=args.ell or 1, max_int_dim=args.max_int_dim, split_s=args.split_s, **extra)


def _report(args, summary) -> int:
    print(f"{summary.experiment}: estimate {summary.estimate:.6f} +- {summary.ci_halfwidth:.6f} (99% Hoeffding, {summary.trials} trials)")
    for name, b in summary.bound_values.items():
        print(f"  {name:<20} {b.raw!r}")
    for key, val in summary.details.items():
        if key != "family":
            print(f"  {key}: {val}")
    print(f"verdict: {'pass' if summary.verdict else 'fail'}")
    print(f"note: {ASYMPTOTIC_NOTE}")
    _emit(args, [summary.csv_row()], {"summary": summary.to_dict()})
    return 0 if summary.verdict else 1


def _load_family(args):
    path = getattr(args, "family_json", None)
    return SubspaceFamily.from_json(path.read_text()) if path else None


def cmd_mc_single(args) -> int:
    return _report(args, mc_single_subspace(_config(args)))


def cmd_mc_pair(args) -> int:
    cfg = _config(args)
    if args.basis or args.basis2:
        if not (args.basis and args.basis2):
            raise UsageError("give both --basis and --basis2")
        v1 = _subspace(args, cfg.params, args.basis)
        v2 = _subspace(args, cfg.params, args.basis2)
    else:
        m = cfg.d // 2 if args.m is None else args.m
        v1, v2 = pair_with_intersection(cfg.params, cfg.d, m)
    return _report(args, mc_pair_subspaces(cfg, v1, v2))


def cmd_mc_family(args) -> int:
    return _report(args, mc_family_failure(_config(args, family=_load_family(args), spot_checks=args.spot_checks)))


def cmd_mc_boost(args) -> int:
    return _report(args, mc_boost_split(_config(args, family=_load_family(args), spot_checks=args.spot_checks)))


COMMANDS = {
    "bounds": cmd_bounds,
    "shatter-check": cmd_shatter_check,
    "certificate": cmd_certificate,
    "rip-bruteforce": cmd_rip_bruteforce,
    "family-build": cmd_family_build,
    "mc-single": cmd_mc_single,
    "mc-pair": cmd_mc_pair,
    "mc-family": cmd_mc_family,
    "mc-boost": cmd_mc_boost,
}


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not is_prime(args.p):
            raise UsageError(f"--p must be prime, got {args.p}")
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (UsageError, FieldError, ConfigError, GuardExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
