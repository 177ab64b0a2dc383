"""Command-line front end.

Subcommands: ``info`` (one invariants report), ``table`` (reproduce and
verify the reference table), ``bound`` (growth exponents), ``verify``
(randomized check suites), ``search`` (strong-bound counterexample
search in rank >= 3), ``cache`` (structure-constant JSON cache).

Exit codes: 0 success / zero violations; 1 a theorem-backed check or
table comparison failed (build bug); 2 usage error, including refusals
for intolerable primes; 3 the conjecture search found a witness (a
finding, not a failure).

All randomized subcommands default to seed 1729, so identical
invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import os
import sys

from .encoding import canonical_json, frac_str
from .growth_bounds import growth_exponent, improvement_table
from .invariants import (
    CSV_HEADER,
    IntolerablePrimeError,
    RankRestrictionError,
    compute_report,
    report_csv_row,
    table_configurations,
    verify_table_row,
)
from .root_data import (
    CACHE_DIR_ENV,
    INTOLERABLE,
    classify_prime,
    is_prime,
    load_structure_cache,
    root_system,
    save_structure_cache,
    structure_constants,
)
from .verifier import (
    DEFAULT_SEED,
    RegimeError,
    TrialConfig,
    reverify_violation,
    run_suite,
    search_strong_bound,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_FINDING = 3


def _default_cache_dir():
    return os.environ.get(
        CACHE_DIR_ENV, os.path.join(os.path.expanduser("~"), ".cache", "chevalley")
    )


def _default_trials(rank: int) -> int:
    return 10_000 if rank <= 4 else 1_000


def _add_config_flags(p, with_p=True):
    p.add_argument("--family", required=True, choices=list("ABCDEFG"))
    p.add_argument("--rank", required=True, type=int)
    if with_p:
        p.add_argument("--p", required=True, type=int, dest="prime")


def _add_trial_flags(p):
    p.add_argument("--trials", type=int, default=None,
                   help="trial count (default 10^4 for rank <= 4, else 10^3)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--policy", choices=["boundary", "uniform"], default="boundary")
    p.add_argument("--jobs", type=int, default=1)


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="chevalley",
        description="Chevalley Lie algebras over F_p: invariants, growth "
        "exponents, and randomized bound verification.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="invariants report for one configuration")
    _add_config_flags(p)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--out")

    p = sub.add_parser("table", help="reproduce the reference table and verify it")
    p.add_argument("--max-rank", type=int, default=8)
    p.add_argument("--primes", default="2,3,5,7")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--out")

    p = sub.add_parser("bound", help="growth exponents as exact rationals")
    _add_config_flags(p)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--k-min", type=int, default=None,
                   help="emit a range k-min..k instead of a single k")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run the randomized check suites")
    _add_config_flags(p)
    _add_trial_flags(p)
    p.add_argument("--suites", default=None,
                   help="comma-separated subset of the applicable checks")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")

    p = sub.add_parser("search", help="probe the strong bound in rank >= 3")
    _add_config_flags(p)
    _add_trial_flags(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")

    p = sub.add_parser("cache", help="structure-constant JSON cache")
    p.add_argument("action", choices=["build", "info"])
    p.add_argument("--max-rank", type=int, default=8)
    p.add_argument("--dir", default=None)
    return ap


def _cmd_info(args) -> int:
    rep = compute_report(args.family, args.rank, args.prime)
    if args.format == "json":
        _emit(canonical_json(rep.to_json_dict()), args.out)
    elif args.format == "csv":
        _emit(CSV_HEADER + "\n" + report_csv_row(rep) + "\n", args.out)
    else:
        d = rep.to_json_dict()
        lines = [f"{k}: {d[k]}" for k in sorted(d) if k != "schema_version"]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_table(args) -> int:
    primes = [int(x) for x in args.primes.split(",") if x]
    for q in primes:
        if not is_prime(q):
            raise ValueError(f"--primes entry {q} is not prime")
    rows, checks, skips = [], [], []
    for family, rank in table_configurations(args.max_rank):
        for q in primes:
            if classify_prime(root_system(family, rank), q) == INTOLERABLE:
                skips.append({"family": family, "rank": rank, "p": q,
                              "status": "skip", "reason": "intolerable prime"})
                continue
            rep = compute_report(family, rank, q)
            chk = verify_table_row(rep)
            rows.append(rep)
            checks.append(chk)
    mismatches = [c for c in checks if not c.ok]
    if args.format == "csv":
        text = CSV_HEADER + "\n" + "\n".join(report_csv_row(r) for r in rows) + "\n"
    elif args.format == "json":
        text = canonical_json({
            "schema_version": 1,
            "rows": [r.to_json_dict() for r in rows],
            "skipped": skips,
            "mismatches": [
                {"family": c.family, "rank": c.rank, "p": c.p,
                 "detail": [list(map(str, d)) for d in c.detail]}
                for c in mismatches
            ],
        })
    else:
        lines = [CSV_HEADER.replace(",", "  ")]
        for r, c in zip(rows, checks):
            lines.append(report_csv_row(r).replace(",", "  ") + f"  [{c.status}]")
        for s in skips:
            lines.append(f"{s['family']}{s['rank']}  {s['p']}  [skip: {s['reason']}]")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if mismatches:
        print(f"table: {len(mismatches)} row(s) disagree", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _cmd_bound(args) -> int:
    if args.k <= 0:
        raise ValueError("--k must be positive")
    rep = compute_report(args.family, args.rank, args.prime)
    ks = list(range(args.k_min, args.k + 1)) if args.k_min else [args.k]
    bounds = [growth_exponent(rep, k) for k in ks]
    comparison = improvement_table(rep, ks)
    if args.format == "json":
        text = canonical_json({
            "schema_version": 1,
            "bounds": [b.to_json_dict() for b in bounds],
            "comparison": [r.to_json_dict() for r in comparison],
        })
    elif args.format == "csv":
        header = "k,regime,exponent,quad_coeff,lin_coeff,baseline_exponent,difference"
        lines = [header]
        for b, c in zip(bounds, comparison):
            lines.append(",".join([
                str(b.k), b.regime, frac_str(b.exponent), frac_str(b.quad_coeff),
                frac_str(b.lin_coeff), frac_str(b.baseline_exponent),
                frac_str(c.difference),
            ]))
        text = "\n".join(lines) + "\n"
    else:
        lines = []
        for b, c in zip(bounds, comparison):
            lines.append(
                f"k={b.k} regime={b.regime} exponent={frac_str(b.exponent)} "
                f"baseline={frac_str(b.baseline_exponent)} "
                f"improvement={frac_str(c.difference)}"
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _trial_config(args) -> TrialConfig:
    trials = args.trials if args.trials else _default_trials(args.rank)
    return TrialConfig(seed=args.seed, trials=trials, policy=args.policy,
                       jobs=args.jobs)


def _cmd_verify(args) -> int:
    suites = args.suites.split(",") if args.suites else None
    result = run_suite(args.family, args.rank, args.prime,
                       _trial_config(args), suites=suites)
    if args.format == "json":
        _emit(canonical_json(result), args.out)
    else:
        lines = [f"{args.family}{args.rank} p={args.prime} "
                 f"trials={result['config']['trials']} seed={result['config']['seed']}"]
        for name, chk in result["checks"].items():
            n = len(chk["violations"])
            slack = chk["min_slack"]
            lines.append(
                f"  {name}: {'ok' if n == 0 else f'{n} VIOLATIONS'}"
                + (f" (min slack {slack})" if slack is not None else "")
            )
        lines.append("overall: " + ("ok" if result["ok"] else "VIOLATIONS FOUND"))
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if result["ok"] else EXIT_VIOLATION


def _cmd_search(args) -> int:
    from .chevalley_algebra import algebra

    rep = compute_report(args.family, args.rank, args.prime)
    L = algebra(args.family, args.rank, args.prime)
    report = search_strong_bound(L, rep, _trial_config(args))
    reverified = all(
        reverify_violation(L, v, "strong_bound_search") for v in report.violations
    )
    doc = report.to_json_dict()
    doc["witnesses_reverified"] = reverified
    if args.format == "json":
        _emit(canonical_json(doc), args.out)
    else:
        n = len(report.violations)
        lines = [
            f"strong-bound search on {args.family}{args.rank} p={args.prime}: "
            f"{report.trials} trials, {n} witness(es), "
            f"min slack {frac_str(report.min_slack)}"
        ]
        if n:
            lines.append(f"witnesses re-verified: {reverified}")
        _emit("\n".join(lines) + "\n", args.out)
    if report.violations and not reverified:
        return EXIT_VIOLATION  # a witness that fails re-verification is a bug
    return EXIT_FINDING if report.violations else EXIT_OK


def _cmd_cache(args) -> int:
    cache_dir = args.dir or _default_cache_dir()
    if args.action == "build":
        for family, rank in table_configurations(args.max_rank):
            path = save_structure_cache(structure_constants(family, rank), cache_dir)
            print(f"cached {family}{rank} -> {path}")
        return EXIT_OK
    for family, rank in table_configurations(args.max_rank):
        try:
            cs = load_structure_cache(family, rank, cache_dir)
        except Exception as exc:  # corrupted cache reported, not raised
            print(f"{family}{rank}: INVALID ({exc})")
            continue
        print(f"{family}{rank}: " + ("ok" if cs is not None else "absent"))
    return EXIT_OK


_COMMANDS = {
    "info": _cmd_info,
    "table": _cmd_table,
    "bound": _cmd_bound,
    "verify": _cmd_verify,
    "search": _cmd_search,
    "cache": _cmd_cache,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (IntolerablePrimeError, RankRestrictionError, RegimeError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main():  # pragma: no cover - thin wrapper for the entry point
    raise SystemExit(main())


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
