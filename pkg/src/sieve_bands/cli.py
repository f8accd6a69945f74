"""Command-line front end: ``sieve-bands {eval,bands,sweep,fit,verify,extremal}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from sieve_bands.bands import (
    BandParams,
    band_sum_decomposition,
    band_sum_direct,
    bound_ratios,
    remark1_bound,
)
from sieve_bands.core_arith import DomainError, TableSizeError
from sieve_bands.experiments import (
    SweepConfig,
    fit_loglog,
    fmt,
    parse_eps,
    parse_grid,
    parse_spec_source,
    read_csv_columns,
    run_sweep,
)
from sieve_bands.extremal import build_extremal, dump_csv, extremal_identity_check, lower_bound_ratio
from sieve_bands.sieve_function import SpecParseError, eval_f, eval_f_range
from sieve_bands.spectra import DEFAULT_EPS_GRID
from sieve_bands.verify import SUITES, run_suite

AGREEMENT_RTOL = 1e-8


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _spec_from_args(args, Q: int | None = None):
    source = parse_spec_source(args.spec)
    if source.needs_Q and Q is None:
        raise ValueError(f"builder {source.builder!r} needs Q (give {source.builder}:Q=<int> or --Q)")
    return source.build(Q)


def cmd_eval(args) -> int:
    spec = _spec_from_args(args, args.Q)
    if args.n is not None:
        print(fmt(eval_f(spec, args.n)))
        return 0
    table = eval_f_range(spec, args.N)
    for n, v in zip(table.range().tolist(), table.values.tolist()):
        print(f"{n} {fmt(v)}")
    return 0


def cmd_bands(args) -> int:
    spec = _spec_from_args(args, args.Q)
    p = BandParams(args.q, args.r, args.b, args.N, args.H)
    for w in p.warnings():
        _warn(w)
    table = eval_f_range(spec, p.N)
    results = []
    if args.method in ("direct", "both"):
        results.append(band_sum_direct(spec, p, table))
    if args.method in ("decomp", "both"):
        results.append(band_sum_decomposition(spec, p, table))
    for res in results:
        print(f"method={res.method} T={fmt(res.T)} band_total={fmt(res.band_total)} main_term={fmt(res.main_term)}")
    ratios = bound_ratios(results[0], spec, p, args.eps)
    for eps, br in ratios.items():
        print(
            f"eps={eps:g} eq4_ratio={fmt(br.eq4_ratio)} trivial_ratio={fmt(br.trivial_ratio)} "
            f"theta={fmt(br.theta)} level={fmt(br.level)} g_eps_norm={fmt(spec.eps_norm(eps))}"
        )
    if args.remark1 and p.q >= 2:
        print(f"remark1_bound={fmt(remark1_bound(spec, p.q, p.N, p.H, table))}")
    if len(results) == 2:
        diff = abs(results[0].T - results[1].T)
        tol = AGREEMENT_RTOL * (1 + float(np.abs(table.values).sum()))
        status = "OK" if diff <= tol else "MISMATCH"
        print(f"difference={fmt(diff)} tolerance={fmt(tol)} {status}")
        return 0 if status == "OK" else 1
    return 0


def cmd_sweep(args) -> int:
    cfg = SweepConfig(
        source=parse_spec_source(args.spec),
        N=parse_grid(args.N),
        q=parse_grid(args.q),
        Q=parse_grid(args.Q) if args.Q is not None else parse_grid(""),
        H=parse_grid(args.H),
        r=parse_grid(args.r, allow_all=True),
        b=parse_grid(args.b, allow_all=True),
        eps_grid=args.eps,
        method=args.method,
        kind=args.kind,
        ell_max=args.ell_max,
        timing=args.timing,
        jobs=args.jobs,
    )
    if cfg.source.needs_Q and not (cfg.Q.values or cfg.Q.power is not None):
        raise ValueError(f"builder {cfg.source.builder!r} needs --Q")
    out = Path(args.out)
    try:
        fh = open(out, "w", encoding="utf-8", newline="")
    except OSError as exc:
        print(f"error: cannot write {out}: {exc.strerror}", file=sys.stderr)
        return 1
    with fh:
        stats = run_sweep(cfg, fh)
    print(f"wrote {stats.rows} rows to {out}", file=sys.stderr)
    if stats.skipped_gcd:
        print(f"skipped {stats.skipped_gcd} (r, b) pairs with gcd(r, q) != 1", file=sys.stderr)
    if stats.skipped_other:
        print(f"skipped {stats.skipped_other} rows with q < 2 (decomposition needs q >= 2)", file=sys.stderr)
    for w, count in sorted(stats.warnings.items()):
        _warn(f"{w} in {count} rows")
    return 0


def cmd_fit(args) -> int:
    xs, ys = read_csv_columns(args.csv, args.x, args.y)
    res = fit_loglog(xs, ys)
    if res.skipped:
        print(f"skipped {res.skipped} rows with nonpositive values", file=sys.stderr)
    print(f"slope={fmt(res.slope)} intercept={fmt(res.intercept)} residual={fmt(res.residual)} rows={res.used}")
    return 0


def cmd_verify(args) -> int:
    outcomes = run_suite(args.suite, args.seed)
    failed = [o for o in outcomes if not o.passed]
    print(f"{len(outcomes) - len(failed)}/{len(outcomes)} checks passed (seed {args.seed})")
    return 1 if failed else 0


def cmd_extremal(args) -> int:
    inst = build_extremal(args.q, args.Q, args.N, args.H)
    lhs, rhs = extremal_identity_check(inst)
    lb = lower_bound_ratio(inst)
    tol = AGREEMENT_RTOL * (1 + rhs)
    print(f"q={inst.q} Q={inst.Q} N={inst.N} H={inst.H}")
    print(f"|T|={fmt(lhs)} sum_abs_inner={fmt(rhs)} identity={'OK' if abs(lhs - rhs) <= tol else 'MISMATCH'}")
    print(f"S_size={inst.S_size} E_size={inst.E_size} S_fraction={fmt(lb.S_fraction)}")
    print(f"ratio={fmt(lb.ratio)} divisor_majorant={lb.divisor_majorant} majorant={'OK' if lb.majorant_ok else 'VIOLATED'}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            dump_csv(inst, fh)
    return 0 if abs(lhs - rhs) <= tol else 1


def _eps_arg(text: str):
    try:
        return parse_eps(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sieve-bands", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def spec_arg(p, required=True):
        p.add_argument("--spec", required=required, help="builder[:k=v,...] (tau_Q, const1, zero, random) or spec file")

    p = sub.add_parser("eval", help="print f(n) or f on (N, 2N]")
    spec_arg(p)
    p.add_argument("--Q", type=int, help="range for builders that need one")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=int)
    grp.add_argument("--N", type=int)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bands", help="band discrepancy T_f(q, r, b, N, H)")
    spec_arg(p)
    p.add_argument("--Q", type=int)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--H", type=int, required=True)
    p.add_argument("--method", choices=["direct", "decomp", "both"], default="direct")
    p.add_argument("--eps", type=_eps_arg, default=DEFAULT_EPS_GRID)
    p.add_argument("--remark1", action="store_true", help="also print the (r, b)-free majorant")
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("sweep", help="grid sweep to CSV")
    spec_arg(p)
    p.add_argument("--N", required=True, help="grid: 7 | 1,2,5 | a:b:steps")
    p.add_argument("--q", default="2", help="grid or N^a/b")
    p.add_argument("--Q", help="grid or N^a/b (for builders without a fixed Q)")
    p.add_argument("--H", default="1", help="grid or N^a/b")
    p.add_argument("--r", default="1", help="grid or 'all'")
    p.add_argument("--b", default="0", help="grid or 'all'")
    p.add_argument("--eps", type=_eps_arg, default=DEFAULT_EPS_GRID)
    p.add_argument("--method", choices=["direct", "decomp"], default="direct")
    p.add_argument("--kind", choices=["bands", "residual"], default="bands")
    p.add_argument("--ell-max", type=int, default=50, help="largest denominator for --kind residual")
    p.add_argument("--timing", action="store_true", help="record elapsed_ms (makes output nondeterministic)")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="accepted for symmetry; sweeps draw no random numbers")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="least-squares slope of ln y against ln x")
    p.add_argument("csv")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("verify", help="run self-check suites")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extremal", help="sign construction on (Q, 2Q]")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--H", type=int, required=True)
    p.add_argument("--out", help="CSV dump with columns d, inner, g, in_S")
    p.set_defaults(func=cmd_extremal)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecParseError, DomainError, TableSizeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
