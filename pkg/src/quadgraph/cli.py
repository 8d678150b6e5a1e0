"""Command-line front end.

Exit codes: 0 success, 1 a checked property failed, 2 usage or
validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import plotting
from .census import (
    DEFAULT_BUCKET,
    BudgetExceeded,
    aggregate,
    census_brute,
    census_reduced,
    census_sampled,
    proportions,
)
from .cover import greedy_leafless
from .dist import DEFAULT_BINS, delta_histogram
from .field import FieldError, build_field, is_prime, primes_between
from .leaves import (
    ShiftFamily,
    TableUnavailable,
    count_leaves_bitset,
    count_leaves_scan,
)
from .reports import (
    SchemaError,
    census_records,
    cover_records,
    dist_records,
    dist_summary,
    emit_csv,
    emit_json,
    parse_csv,
)
from .verify import SUITES, run_suite

log = logging.getLogger("quadgraph")

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _shift_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shift list {text!r}") from None


def _add_prange(sp, required=True):
    g = sp.add_mutually_exclusive_group(required=required)
    g.add_argument("--p", type=int, help="a single prime")
    g.add_argument("--pmax", type=int, help="every prime in [--pmin, --pmax]")
    sp.add_argument("--pmin", type=int, default=3)


def _add_output(sp, formats=("csv", "json")):
    sp.add_argument("--out", "-o", type=Path, help="output file (default: stdout)")
    sp.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadgraph",
        description="Leaves of functional graphs of X^2 + a_i over prime fields.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("field-info", help="residue table facts for one prime")
    sp.add_argument("--p", type=int, required=True)

    sp = sub.add_parser("leaves", help="count leaves of one family")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--shifts", type=_shift_list, required=True, help="comma separated")
    sp.add_argument("--verify", action="store_true", help="run both kernels and compare")

    sp = sub.add_parser("census", help="leaf histograms over all n-families")
    _add_prange(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=("auto", "brute", "reduced", "both"), default="auto")
    bk = sp.add_mutually_exclusive_group()
    bk.add_argument("--bucket", type=int, default=DEFAULT_BUCKET,
                    help="merge k >= BUCKET into one row (default %(default)s)")
    bk.add_argument("--no-bucket", action="store_true")
    sp.add_argument("--sample", type=int, help="sample this many families when over budget")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--figure", type=Path, help="also render a figure to this path")
    sp.add_argument("--figure-kind", choices=("stacked", "lognum", "minmax"), default="stacked")
    _add_output(sp)

    sp = sub.add_parser("cover", help="greedy leafless families")
    _add_prange(sp)
    sp.add_argument("--check-thresholds", action="store_true")
    _add_output(sp)

    sp = sub.add_parser("dist", help="Delta histogram against the semicircle law")
    _add_prange(sp)
    sp.add_argument("--bins", type=int, default=DEFAULT_BINS)
    sp.add_argument("--sample", type=int, help="sample this many ordered triples")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--figure", type=Path, help="also render the histogram figure")
    _add_output(sp)

    sp = sub.add_parser("plot", help="render a figure from a census or dist CSV")
    sp.add_argument("input", type=Path)
    sp.add_argument("--kind", choices=plotting.KINDS, required=True)
    sp.add_argument("--out", "-o", type=Path, required=True)

    sp = sub.add_parser("verify", help="run property suites")
    sp.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    sp.add_argument("--pmax", type=int, default=31)
    return parser


def _primes(args) -> list[int]:
    if args.p is not None:
        build_field(args.p)
        return [args.p]
    if args.pmax < 3 or args.pmin < 3:
        raise UsageError("p-range endpoints must be >= 3")
    for end in (args.pmin, args.pmax):
        if not is_prime(end):
            log.info("range endpoint %d is not prime; skipped", end)
    primes = primes_between(args.pmin, args.pmax)
    if not primes:
        raise UsageError(f"no primes in [{args.pmin}, {args.pmax}]")
    return primes


def _write(args, text: str) -> None:
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)


def _emit(args, schema: str, records: list[dict]) -> None:
    _write(args, emit_csv(schema, records) if args.format == "csv" else emit_json(records))


def cmd_field_info(args) -> int:
    F = build_field(args.p)
    info = {"p": F.p, "lambda": F.lam, "mode": "table" if F.has_table else "euler",
            "p_mod_4": F.p % 4}
    if F.has_table:
        info["squares"] = int(F.squares.sum())
    print(json.dumps(info))
    return EXIT_OK


def cmd_leaves(args) -> int:
    F = build_field(args.p)
    fam = ShiftFamily(F, tuple(args.shifts))
    try:
        count, method = count_leaves_bitset(fam), "bitset"
    except TableUnavailable:
        count, method = count_leaves_scan(fam), "scan"
    if args.verify:
        other = count_leaves_scan(fam)
        if other != count:
            log.error("bitset gave %d, scan gave %d", count, other)
            return EXIT_PROPERTY
        method += "+scan"
    print(json.dumps({"p": F.p, "shifts": list(fam.shifts), "leaf_count": count,
                      "method": method}))
    return EXIT_OK


def _census_one(F, args, bucket):
    method = args.method
    if method == "auto":
        method = "reduced" if args.n >= 2 else "brute"
    try:
        if method == "both":
            brute = census_brute(F, args.n, bucket, workers=args.workers)
            red = aggregate(census_reduced(F, args.n, bucket, workers=args.workers))
            if brute.counts != red.counts:
                raise AssertionError(f"brute and reduced disagree at p={F.p}, n={args.n}")
            return brute
        if method == "reduced":
            return aggregate(census_reduced(F, args.n, bucket, workers=args.workers))
        return census_brute(F, args.n, bucket, workers=args.workers)
    except BudgetExceeded as exc:
        if args.sample is None:
            raise
        log.warning("%s; sampling %d families with seed %d", exc, args.sample, args.seed)
        return census_sampled(F, args.n, args.sample, args.seed, bucket)


def cmd_census(args) -> int:
    bucket = None if args.no_bucket else args.bucket
    records = []
    for p in _primes(args):
        F = build_field(p)
        if args.n > p:
            log.info("n=%d exceeds p=%d; skipped", args.n, p)
            continue
        try:
            H = _census_one(F, args, bucket)
        except AssertionError as exc:
            log.error("%s", exc)
            return EXIT_PROPERTY
        shares = ", ".join(f"{k}: {v:.2f}%" for k, v in proportions(H))
        print(f"p={p} n={args.n} method={H.method} min={H.min_leaves()} "
              f"max={H.label(H.max_leaves())} | {shares}", file=sys.stderr)
        records.extend(census_records(H))
    _emit(args, "census", records)
    if args.figure is not None:
        plotting.render(args.figure_kind, "census", records, args.figure)
    return EXIT_OK


def cmd_cover(args) -> int:
    reports = [greedy_leafless(build_field(p)) for p in _primes(args)]
    schema = "cover-thresholds" if args.check_thresholds else "cover"
    _emit(args, schema, cover_records(reports, args.check_thresholds))
    return EXIT_OK if all(r.leafless for r in reports) else EXIT_PROPERTY


def cmd_dist(args) -> int:
    records = []
    summaries = []
    for p in _primes(args):
        F = build_field(p)
        if args.sample is not None:
            H = delta_histogram(F, args.bins, "sampled", args.sample, args.seed)
        else:
            H = delta_histogram(F, args.bins)
        records.extend(dist_records(H))
        summaries.append(dist_summary(H))
    _emit(args, "dist", records)
    for s in summaries:
        print(f"p={s['p']} mode={s['mode']} sup_cdf_deviation={s['sup_cdf_deviation']:.6f} "
              f"theory={s['theory']}", file=sys.stderr)
    if args.figure is not None:
        plotting.render("hist", "dist", records, args.figure)
    return EXIT_OK


def cmd_plot(args) -> int:
    schema, records = parse_csv(args.input.read_text())
    plotting.render(args.kind, schema, records, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.suite, args.pmax)
    ok = True
    for name, fails in results.items():
        status = "pass" if not fails else "fail"
        ok &= not fails
        print(json.dumps({"suite": name, "pmax": args.pmax, "status": status,
                          "failures": fails[:50]}, default=float))
    return EXIT_OK if ok else EXIT_PROPERTY


COMMANDS = {
    "field-info": cmd_field_info,
    "leaves": cmd_leaves,
    "census": cmd_census,
    "cover": cmd_cover,
    "dist": cmd_dist,
    "plot": cmd_plot,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return COMMANDS[args.command](args)
    except (FieldError, SchemaError, UsageError, BudgetExceeded) as exc:
        print(f"quadgraph {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"quadgraph {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
