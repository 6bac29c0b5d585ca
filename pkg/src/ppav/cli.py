"""Command-line interface.

Subcommands mirror the library pipelines: analyze (one isogeny class, full
report), ec-census (trace distribution over F_p), convenient (certify an
order from a JSON file), measures (density tables), find-heavy (isogeny
classes with small h/H), examples (family sweeps with bound checks).

Exit codes: 0 success, 2 domain error, 3 invalid Weil polynomial, 4 I/O
failure.  JSON output is deterministic: keys sorted, floats in shortest
round-trip form (at most 17 significant digits).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import census, measures, orders, strata, weil
from .errors import DomainError, NotWeilShape, SearchLimitError

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NOT_WEIL = 3
EXIT_IO = 4


def _dumps(obj):
    return json.dumps(obj, sort_keys=True)


def _parse_poly(text):
    try:
        return [int(c) for c in text.split(",")]
    except ValueError as exc:
        raise DomainError(f"could not parse coefficients {text!r}") from exc


def _cmd_analyze(args):
    coeffs = _parse_poly(args.weil)
    spec = weil.isogeny_class(coeffs, args.q)
    ctx = orders.FieldContext(list(spec.f), spec.q)
    minimal = orders.minimal_order(ctx)
    cert = orders.convenient_certificate(minimal)
    reports = strata.analyze(spec)
    header = {
        "type": "class",
        "weil": [str(c) for c in spec.f],
        "q": str(spec.q),
        "n": str(spec.n),
        "real_weil": [str(c) for c in spec.g],
        "angles": list(spec.angles),
        "ordinary": weil.is_ordinary(list(spec.f), spec.q),
        "simple": weil.is_simple(list(spec.f)),
        "minimal_order": {
            "den": str(minimal.den),
            "basis": [[str(x) for x in row] for row in minimal.rows],
        },
        "convenient": {
            "stable_under_conjugation": cert.stable_under_conjugation,
            "real_subring_gorenstein": cert.real_subring_gorenstein,
            "pure_imaginary_index": str(cert.pure_imaginary_index),
            "is_convenient": cert.is_convenient,
        },
    }
    if args.json:
        print(_dumps(header))
        for report in reports:
            print(_dumps({"type": "stratum", **strata.report_to_json(report)}))
    else:
        print(f"Weil polynomial over F_{spec.q}: {list(spec.f)} (n = {spec.n})")
        print(f"  real companion: {list(spec.g)}")
        print(f"  Frobenius angles: {[round(a, 6) for a in spec.angles]}")
        print(f"  minimal order Z[pi, pibar]: den={minimal.den} rows={list(minimal.rows)}")
        print(f"  convenient: {cert.is_convenient} (index {cert.pure_imaginary_index})")
        for report in reports:
            if report.exact_count is not None:
                print(
                    f"  stratum {report.stratum}: {report.exact_count} principally "
                    f"polarized varieties (exact), disc ratio {report.ratio_exact}"
                )
            else:
                print(
                    f"  stratum {report.stratum}: ~{report.estimate:.1f} (estimate), "
                    f"disc ratio {report.ratio_exact}, surjectivity {report.surjectivity}, "
                    f"odd ramification {report.odd_ramified}"
                )
    return EXIT_OK


def _cmd_ec_census(args):
    rows = census.enumerate_ec(args.p, threads=args.threads)
    summary = census.summarize(rows, bins=args.bins)
    with open(args.out, "w", newline="") as handle:
        census.write_census_csv(rows, handle)
    with open(args.out + ".summary.json", "w") as handle:
        handle.write(_dumps(census.summary_to_json(summary)))
        handle.write("\n")
    print(
        f"p={args.p}: {summary.class_count} classes, {summary.curve_total} curves, "
        f"TV to semicircle {summary.tv_to_semicircle:.4f}"
    )
    return EXIT_OK


def _cmd_convenient(args):
    _, lattice = orders.load_order_file(args.order_file)
    cert = orders.convenient_certificate(lattice)
    gorenstein = orders.is_gorenstein(lattice)
    print(
        _dumps(
            {
                "stable_under_conjugation": cert.stable_under_conjugation,
                "real_subring_gorenstein": cert.real_subring_gorenstein,
                "pure_imaginary_index": cert.pure_imaginary_index,
                "is_convenient": cert.is_convenient,
                "is_gorenstein": gorenstein,
            }
        )
    )
    return EXIT_OK


def _cmd_measures(args):
    spec = measures.measure_spec(args.n)
    constants = {
        "n": args.n,
        "v_n": str(spec.v_n),
        "c_n": spec.c_n,
        "d_n_nominal": spec.d_n_nominal,
        "d_n_eff": spec.d_n_eff,
    }
    if args.out:
        with open(args.out, "w", newline="") as handle:
            measures.write_density_csv(args.n, args.grid, handle)
        print(_dumps(constants))
    else:
        print(_dumps(constants))
        measures.write_density_csv(args.n, args.grid, sys.stdout)
    return EXIT_OK


def _cmd_find_heavy(args):
    witness = strata.find_heavy_isogeny_class(args.m, args.d0, search_limit=args.limit)
    payload = {
        "p": str(witness.p),
        "t": str(witness.t),
        "delta": str(witness.delta),
        "conductor": str(witness.conductor),
        "conductor_note": witness.conductor_note,
        "ratio": str(witness.ratio),
        "bound": str(witness.bound),
        "x": str(witness.x),
        "y": str(witness.y),
    }
    print(_dumps(payload))
    return EXIT_OK


def _cmd_examples(args):
    primes = strata.family_primes(args.pmax)
    if not primes:
        raise DomainError(f"no primes congruent to 7 mod 8 below {args.pmax}")

    def run(p):
        _, report = strata.example_family(args.family, p)
        return report

    if args.threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            reports = list(pool.map(run, primes))
    else:
        reports = [run(p) for p in primes]
    for report in reports:
        print(
            _dumps(
                {
                    "family": report.kind,
                    "p": str(report.p),
                    "ratio_exact": str(report.ratio_exact),
                    "bound_checked": report.bound_checked,
                }
            )
        )
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ppav",
        description="Exact analysis of simple ordinary isogeny classes: convenient "
        "orders, principally polarized counts per stratum, and angle distributions.",
    )
    default_threads = int(os.environ.get("PPAV_THREADS", "1"))
    parser.add_argument(
        "--threads",
        type=int,
        default=default_threads,
        help="parallelism cap for sweeps (default: PPAV_THREADS or 1)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="full report for one Weil polynomial")
    p_an.add_argument("--weil", required=True, help="comma-separated ascending coefficients")
    p_an.add_argument("--q", required=True, type=int, help="prime power field size")
    p_an.add_argument("--json", action="store_true", help="machine-readable output")
    p_an.set_defaults(func=_cmd_analyze)

    p_ec = sub.add_parser("ec-census", help="elliptic census over F_p")
    p_ec.add_argument("--p", required=True, type=int)
    p_ec.add_argument("--bins", type=int, default=40)
    p_ec.add_argument("--out", required=True, help="CSV path; summary JSON gets .summary.json")
    p_ec.set_defaults(func=_cmd_ec_census)

    p_cv = sub.add_parser("convenient", help="certify an order from a JSON lattice file")
    p_cv.add_argument("--order-file", required=True)
    p_cv.set_defaults(func=_cmd_convenient)

    p_me = sub.add_parser("measures", help="angle-density tables and constants")
    p_me.add_argument("--n", required=True, type=int)
    p_me.add_argument("--grid", type=int, default=64)
    p_me.add_argument("--out", help="CSV path (default: stdout)")
    p_me.set_defaults(func=_cmd_measures)

    p_fh = sub.add_parser("find-heavy", help="isogeny class with small h/H")
    p_fh.add_argument("--m", required=True, type=int)
    p_fh.add_argument("--d0", required=True, type=int, help="fundamental discriminant < -4")
    p_fh.add_argument("--limit", type=int, default=10_000)
    p_fh.set_defaults(func=_cmd_find_heavy)

    p_ex = sub.add_parser("examples", help="sweep an example family, checking bounds")
    p_ex.add_argument("--family", required=True, choices=["small", "smaller", "smallest"])
    p_ex.add_argument("--pmax", required=True, type=int)
    p_ex.set_defaults(func=_cmd_examples)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotWeilShape as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_WEIL
    except (DomainError, SearchLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
