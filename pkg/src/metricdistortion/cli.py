"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 domain error (bad election, metric
or parameters, or a reproduction check outside tolerance).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import bounds
from .adversary import optimal_lottery_m3, worst_case_distortion
from .election import ElectionError, dump_election, load_election, random_election
from .mechanisms import MECHANISMS, lp_a_lottery
from .metrics import (
    build_0123,
    build_13,
    build_biased,
    build_generalized_0123,
    metric_from_dict,
    validate_metric,
)

DEFAULT_SEED = 42


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def fmt(value):
    """Round floats to 6 significant digits for stable output."""
    if isinstance(value, dict):
        return {k: fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [fmt(v) for v in value]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return float(f"{value:.6g}")
    if isinstance(value, np.integer):
        return int(value)
    return value


def emit(obj, out):
    out.write(json.dumps(fmt(obj), indent=2) + "\n")


def seed_from_env() -> int:
    raw = os.environ.get("DISTORTION_SEED")
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"DISTORTION_SEED must be an integer, got {raw!r}") from None


def parse_m_list(text: str) -> list:
    ms = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part in ("inf", "infinity", "∞"):
            ms.append(math.inf)
        elif ".." in part:
            lo, hi = part.split("..", 1)
            ms.extend(range(int(lo), int(hi) + 1))
        else:
            ms.append(int(part))
    if not ms:
        raise ValueError("empty m list")
    for m in ms:
        if m < 3:
            raise ValueError(f"m must be >= 3, got {m}")
    return ms


def parse_lottery(text: str, m: int) -> np.ndarray:
    try:
        p = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise UsageError(f"lottery must be comma-separated numbers, got {text!r}") from None
    if p.size != m:
        raise DomainError(f"lottery has {p.size} entries but the election has {m} candidates")
    if np.any(p < 0) or abs(p.sum() - 1) > 1e-6:
        raise DomainError("lottery must be nonnegative and sum to 1")
    return p / p.sum()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="metricdistortion", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", parser_class=_Parser)

    p = sub.add_parser("analyze", help="run a mechanism on an election file")
    p.add_argument("election")
    p.add_argument(
        "--mechanism",
        default="lpB",
        choices=["lpA", "lpB", "lpC", "smart", "rd", "optimal3"],
        help="lpA runs over the election's (0,1,2,3)-metrics",
    )

    p = sub.add_parser("adversary", help="worst-case distortion of a lottery")
    p.add_argument("election")
    p.add_argument("--lottery", required=True, help="comma-separated probabilities")
    p.add_argument("--witness", action="store_true", help="include the worst metric")

    p = sub.add_parser("lowerbound", help="evaluate a lower-bound parameter point")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--emit", metavar="PATH", help="write the election JSON (m <= 10)")

    p = sub.add_parser("table", help="reproduce lower-bound table rows as CSV")
    p.add_argument("--m", default="3..10,50,100,1000,inf", help="e.g. 3,4,5 or 3..10,inf")
    p.add_argument("--tol", type=float, help="compare against the reported rows")

    p = sub.add_parser("verify-metric", help="validate a metric file or random families")
    p.add_argument("metric", nargs="?")
    p.add_argument("--election", help="election file when the metric does not embed one")
    p.add_argument("--random", type=int, metavar="N", help="check all builders on N seeded elections")

    p = sub.add_parser("optimal3", help="instance-optimal lottery for m = 3")
    p.add_argument("election")
    return parser


def _load(path):
    try:
        return load_election(path)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from None


def cmd_analyze(args, out):
    e = _load(args.election)
    if args.mechanism == "lpA":
        res = lp_a_lottery(e, [build_0123(e, i) for i in range(1, e.m + 1)])
    elif args.mechanism == "optimal3":
        if e.m != 3:
            raise DomainError("optimal3 needs a 3-candidate election")
        res = optimal_lottery_m3(e)
    else:
        res = MECHANISMS[args.mechanism](e)
    emit(res.to_dict(), out)


def cmd_adversary(args, out):
    e = _load(args.election)
    p = parse_lottery(args.lottery, e.m)
    res = worst_case_distortion(e, p)
    doc = res.to_dict()
    if not args.witness:
        doc.pop("witness")
    emit(doc, out)


def cmd_lowerbound(args, out, err):
    m = args.m
    if m < 3:
        raise DomainError("m must be >= 3")
    if args.a is None or args.b is None:
        row = bounds.optimize_beta(m - 3)
        a, b, c = row.a, row.b, row.c
    else:
        a, b, c = args.a, args.b, args.c
    if m > 3 and c is None:
        raise UsageError("--c is required for m >= 4")
    params = bounds.LowerBoundParams(a, b, c if m > 3 else None, m - 3)
    try:
        value = bounds.beta(params)
        sums = bounds.m_inverse_column_sums(params)
    except bounds.AdmissibilityError as exc:
        raise DomainError(str(exc)) from None
    row = bounds.BoundRow(m, a, b, params.c, value)
    emit(
        {
            "m": m,
            "a": a,
            "b": b,
            "c": params.c,
            "beta": value,
            "distortion_lb": row.distortion_lb,
            "column_sums": list(sums),
        },
        out,
    )
    if args.emit:
        if m > bounds.MAX_EXPLICIT_M:
            raise DomainError(f"explicit elections are limited to m <= {bounds.MAX_EXPLICIT_M}")
        e = bounds.build_lower_bound_election(m, params)
        with open(args.emit, "w", encoding="utf-8") as fh:
            dump_election(e, fh)
        err.write(f"wrote {e.n_types} ranking types to {args.emit}\n")


def cmd_table(args, out, err):
    try:
        ms = parse_m_list(args.m)
    except ValueError as exc:
        raise UsageError(f"bad --m: {exc}") from None
    rows = [bounds.optimize_beta(m - 3) for m in ms]
    out.write(bounds.table_csv(rows))
    if args.tol is not None:
        bad = []
        for row in rows:
            ref = bounds.reported_row(row.m)
            if ref is None:
                err.write(f"no reported row for m = {row.m}; skipped\n")
                continue
            if abs(row.beta - ref[4]) > args.tol or abs(row.distortion_lb - ref[5]) > args.tol:
                bad.append(row.m)
        if bad:
            raise DomainError(f"rows outside tolerance {args.tol}: {bad}")
        err.write(f"all {len(rows)} rows within {args.tol}\n")


def _random_metric_checks(n, seed, err):
    rng = np.random.default_rng(seed)
    failures = 0
    for trial in range(n):
        m = int(rng.integers(2, 7))
        e = random_election(rng, m)
        metrics = [build_0123(e, i) for i in range(1, m + 1)]
        for i in range(1, m + 1):
            try:
                metrics.append(build_13(e, i))
            except ElectionError:
                pass
        x = rng.random(m) * 3
        x[rng.integers(m)] = 0.0
        metrics.append(build_biased(e, x))
        for bits in range(1, 2**m - 1):
            metrics.append(build_generalized_0123(e, [k + 1 for k in range(m) if bits >> k & 1]))
        for d in metrics:
            report = validate_metric(d)
            if not report.ok:
                failures += 1
                err.write(f"trial {trial}: {report.first.message}\n")
    return failures


def cmd_verify_metric(args, out, err):
    if args.random is not None:
        seed = seed_from_env()
        failures = _random_metric_checks(args.random, seed, err)
        emit({"trials": args.random, "seed": seed, "failures": failures, "ok": failures == 0}, out)
        if failures:
            raise DomainError(f"{failures} metric(s) failed validation")
        return
    if args.metric is None:
        raise UsageError("verify-metric needs a metric file or --random N")
    try:
        with open(args.metric, "rb") as fh:
            doc = json.loads(fh.read().decode("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read metric: {exc}") from None
    election = _load(args.election) if args.election else None
    try:
        d = metric_from_dict(doc, election)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    report = validate_metric(d)
    emit(
        {
            "ok": report.ok,
            "violations": [
                {"kind": v.kind, "message": v.message, "candidate": v.candidate, "type": v.type_index}
                for v in report.violations
            ],
        },
        out,
    )
    if not report.ok:
        raise DomainError(f"metric invalid: {report.first.message}")


def cmd_optimal3(args, out):
    e = _load(args.election)
    if e.m != 3:
        raise DomainError("optimal3 needs a 3-candidate election")
    emit(optimal_lottery_m3(e).to_dict(), out)


def run(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb is None:
            raise UsageError(parser.format_usage())
        if args.verb == "analyze":
            cmd_analyze(args, out)
        elif args.verb == "adversary":
            cmd_adversary(args, out)
        elif args.verb == "lowerbound":
            cmd_lowerbound(args, out, err)
        elif args.verb == "table":
            cmd_table(args, out, err)
        elif args.verb == "verify-metric":
            cmd_verify_metric(args, out, err)
        elif args.verb == "optimal3":
            cmd_optimal3(args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return 1
    except (DomainError, ElectionError, bounds.AdmissibilityError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    return 0


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
