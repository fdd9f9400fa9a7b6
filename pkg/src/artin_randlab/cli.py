"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import secrets
import sys
from fractions import Fraction
from typing import Optional

from . import exact, oracle
from .classify import DEFAULT_CLIQUE_BUDGET, classify_all
from .errors import ArtinError, BadLabel, BadSamples
from .graph import PowerGrowth, decode, encode, parse_growth
from .montecarlo import default_workers, estimate, sample_graph, sweep
from .predicates import resolve_predicate

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

TABLE_COLUMNS = ["n", "m", "predicate", "exact", "p_hat", "ci_low", "ci_high", "samples", "seed", "asymptote"]
CONJECTURE_COLUMNS = ["n", "m", "value", "dist_one_minus_inv_e", "dist_inv_sqrt_e"]

ONE_MINUS_INV_E = 1 - math.exp(-1)
INV_SQRT_E = math.exp(-0.5)

VERIFY_GRID = [(2, 2), (2, 5), (3, 2), (3, 3), (3, 4), (3, 5), (4, 2), (4, 3), (5, 2)]


class UsageError(Exception):
    pass


def fmt(value) -> str:
    """Twelve significant digits for floats; blank for missing values."""
    if value is None:
        return ""
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    return format(float(value), ".12g")


def parse_range(text: str) -> list[int]:
    """``a:b:s`` (inclusive of ``b`` when aligned), ``a:b``, ``a,b,c`` or ``a``."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            start, stop, step = parts
            if step <= 0 or stop < start:
                raise UsageError(f"n-range {text!r} must be ascending with a positive step")
            return list(range(start, stop + 1, step))
        values = [int(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse n-range {text!r}") from None
    if any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError(f"n values {text!r} must be ascending")
    return values


def _m_for(args, n: int) -> int:
    if args.growth is not None:
        return args.growth(n)
    if args.m < 2:
        raise BadLabel(f"maximal label must be at least 2, got {args.m}")
    return args.m


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    if args.require_seed:
        raise UsageError("--seed is required when --require-seed is set")
    return secrets.randbits(63)


def _threads(args) -> int:
    return args.threads if args.threads is not None else default_workers()


def _emit(args, rows: list[dict], columns: list[str]) -> None:
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row.get(c, "") for c in columns])
        text = buf.getvalue()
    _write(args, text)


def _write(args, text: str) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _table_row(n, m, predicate, exact_value=None, est=None, asymptote=None, seed=None) -> dict:
    row = {"n": n, "m": m, "predicate": predicate, "exact": fmt(exact_value),
           "asymptote": fmt(asymptote), "p_hat": "", "ci_low": "", "ci_high": "",
           "samples": "", "seed": "" if seed is None else str(seed)}
    if est is not None:
        row.update(p_hat=fmt(est.p_hat), ci_low=fmt(est.ci_low), ci_high=fmt(est.ci_high),
                   samples=str(est.samples), seed=str(est.seed))
    return row


# -- subcommands --------------------------------------------------------------


def cmd_sample(args) -> int:
    seed = _seed(args)
    m = _m_for(args, args.n)
    lines = [encode(sample_graph(seed, args.n, m, i)) for i in range(args.count)]
    _write(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.graph == "-":
        text = sys.stdin.read()
    else:
        with open(args.graph, encoding="utf-8") as fh:
            text = fh.read()
    report = classify_all(decode(text.strip()), args.clique_budget)
    _write(args, json.dumps(report.to_dict()) + "\n")
    return EXIT_OK


FORMULAS = {
    "forbidden": lambda n, m, k: exact.prob_forbidden_labels(n, m, k),
    "22free": lambda n, m, k: exact.prob_22_free_exact(n, m),
    "ex": lambda n, m, k: exact.expectation_x(n, m),
    "ex2": lambda n, m, k: exact.expectation_x2(n, m).e_x2,
    "second-moment": lambda n, m, k: exact.second_moment_lower_bound(n, m),
    "markov": lambda n, m, k: exact.markov_upper_bound(n, m),
    "cone-bound": lambda n, m, k: exact.cone_upper_bound(n, m),
    "join-bound": lambda n, m, k: exact.join_upper_bound(n, m),
    "limit": lambda n, m, k: exact.limit_forbidden(k),
}


def cmd_exact(args) -> int:
    if (args.formula is None) == (args.predicate is None):
        raise UsageError("give exactly one of --formula or --predicate")
    rows = []
    for n in parse_range(args.n):
        m = _m_for(args, n)
        if args.formula is not None:
            value = FORMULAS[args.formula](n, m, args.k)
            label = f"forbidden:{args.k}" if args.formula == "forbidden" else args.formula
            rows.append(_table_row(n, m, label, value))
        else:
            pred = resolve_predicate(args.predicate)
            value = oracle.exact_probability(pred, n, m, args.budget, _threads(args))
            limit = exact.asymptote(pred, args.growth) if args.growth is not None else None
            rows.append(_table_row(n, m, pred.name, value, asymptote=limit))
    _emit(args, rows, TABLE_COLUMNS)
    return EXIT_OK


def cmd_estimate(args) -> int:
    pred = resolve_predicate(args.predicate)
    if args.samples < 1:
        raise BadSamples(f"need at least one sample, got {args.samples}")
    seed = _seed(args)
    rows = []
    for n in parse_range(args.n):
        m = _m_for(args, n)
        est = estimate(pred, n, m, args.samples, seed, args.confidence, _threads(args))
        closed = exact.closed_form(pred, n, m)
        limit = exact.asymptote(pred, args.growth) if args.growth is not None else None
        rows.append(_table_row(n, m, pred.name, closed, est, limit))
    _emit(args, rows, TABLE_COLUMNS)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.growth is None:
        raise UsageError("sweep needs --growth")
    pred = resolve_predicate(args.predicate)
    if args.samples < 1:
        raise BadSamples(f"need at least one sample, got {args.samples}")
    seed = _seed(args)
    table = sweep(args.growth, pred, parse_range(args.n), args.samples, seed,
                  args.confidence, _threads(args))
    rows = [_table_row(r.n, r.m, pred.name, r.exact, r.estimate, r.asymptote) for r in table]
    _emit(args, rows, TABLE_COLUMNS)
    return EXIT_OK


def conjecture_table(n_values) -> list[dict]:
    growth = PowerGrowth(1, Fraction(3, 2))
    rows = []
    for n in n_values:
        m = growth(n)
        value = float(exact.prob_22_free_exact(n, m))
        rows.append({"n": n, "m": m, "value": fmt(value),
                     "dist_one_minus_inv_e": fmt(abs(value - ONE_MINUS_INV_E)),
                     "dist_inv_sqrt_e": fmt(abs(value - INV_SQRT_E))})
    return rows


def cmd_conjecture(args) -> int:
    _emit(args, conjecture_table(parse_range(args.n)), CONJECTURE_COLUMNS)
    return EXIT_OK


def _frac(x) -> str:
    return str(Fraction(x))


def _forbid_labels(m: int, k: int) -> list[str]:
    return [lab for lab in ("2", "3", "inf") if lab == "inf" or int(lab) <= m][:k]


def _verify_plan(n: int, m: int) -> list[str]:
    """Predicates the checks at one grid point enumerate."""
    names = ["avoid:" + ",".join(_forbid_labels(m, k)) for k in range(min(3, m))]
    names += ["two_two_free", "cone"]
    names += [f"join:{k}" for k in ("2", "3", "inf") if k == "inf" or int(k) <= m]
    names.append("fc_type")
    return names


def verify_checks(budget: int, threads: int = 1):
    """Yield ``(status, line)`` pairs; status is PASS, FAIL, SKIP or INFO.

    ``budget`` caps the graph evaluations spent on one grid point: the size
    of the space times the number of enumeration passes its checks need.
    """
    for n, m in VERIFY_GRID:
        passes = len(_verify_plan(n, m)) + (n >= 3)
        cost = oracle.space_size(n, m) * passes
        if cost > budget:
            yield "SKIP", f"n={n} m={m}: {passes} passes over {oracle.space_size(n, m)} graphs exceed budget {budget}"
            continue

        def prob(name):
            return oracle.exact_probability(name, n, m, budget, threads)

        def eq(tag, got, want):
            ok = got == want
            return ("PASS" if ok else "FAIL"), f"{tag} n={n} m={m}: {_frac(got)} == {_frac(want)} {'PASS' if ok else 'FAIL'}"

        def le(tag, lo, hi):
            ok = lo <= hi
            return ("PASS" if ok else "FAIL"), f"{tag} n={n} m={m}: {_frac(lo)} <= {_frac(hi)} {'PASS' if ok else 'FAIL'}"

        for k in range(min(3, m)):
            yield eq(f"forbidden k={k}", prob("avoid:" + ",".join(_forbid_labels(m, k))),
                     exact.prob_forbidden_labels(n, m, k).value)
        yield eq("22free", prob("two_two_free"), exact.prob_22_free_exact(n, m).value)
        yield le("cone-bound", prob("cone"), exact.cone_upper_bound(n, m).value)
        for k in ("2", "3", "inf"):
            if k == "inf" or int(k) <= m:
                yield le(f"join-bound k={k}", prob(f"join:{k}"), exact.join_upper_bound(n, m).value)
        yield le("fc-small", exact.fc_nonmembership_lower_bound(n, m).value, 1 - prob("fc_type"))
        if n < 3:
            continue
        moments = oracle.moments_by_enumeration(n, m, budget)
        report = exact.expectation_x2(n, m)
        yield eq("ex", moments.e_x, exact.expectation_x(n, m))
        yield eq("ex2", moments.e_x2, report.e_x2)
        yield le("second-moment", report.lower_bound, moments.p_nonzero)
        yield le("markov", moments.p_nonzero, exact.markov_upper_bound(n, m).value)
        coeff = exact.case9_coefficient_from(moments.e_x2, n, m)
        yield "INFO", (f"case9 coefficient resolved to {_frac(coeff)} at n={n} m={m} "
                       f"(asymptotically 4N^3/m^3, not 2N^3/m^3)")


def cmd_verify(args) -> int:
    failures = passes = 0
    for status, line in verify_checks(args.budget, _threads(args)):
        print(line if status in ("PASS", "FAIL", "INFO") else f"{line} SKIPPED")
        failures += status == "FAIL"
        passes += status == "PASS"
    if passes == 0 and failures == 0:
        print("warning: every check was skipped; raise --budget", file=sys.stderr)
    print(f"{passes} passed, {failures} failed")
    return EXIT_VERIFY if failures else EXIT_OK


# -- argument parsing -----------------------------------------------------------


def _add_common(p, random=False, space=True, table=True):
    if space:
        group = p.add_mutually_exclusive_group()
        group.add_argument("--m", type=int, help="maximal finite label M")
        group.add_argument("--growth", type=parse_growth, help='growth spec, e.g. "1*N^3/2"')
    if table:
        p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", help="output path (default stdout)")
    p.add_argument("--threads", type=int, help="worker processes (default $ARTIN_RANDLAB_THREADS or 1)")
    if random:
        p.add_argument("--seed", type=int)
        p.add_argument("--require-seed", action="store_true", help="fail unless --seed is given")
        p.add_argument("--confidence", type=float, default=0.99)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artin-randlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw uniform graphs from G^{N,M}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    _add_common(p, random=True, table=False)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("classify", help="report class memberships of a graph file")
    p.add_argument("graph", help="graph file, or - for stdin")
    p.add_argument("--clique-budget", type=int, default=DEFAULT_CLIQUE_BUDGET)
    _add_common(p, space=False, table=False)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("exact", help="closed-form or enumerated probabilities")
    p.add_argument("--formula", choices=sorted(FORMULAS))
    p.add_argument("--predicate")
    p.add_argument("--n", required=True)
    p.add_argument("--k", type=int, default=1, help="forbidden-label count")
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    _add_common(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("estimate", help="Monte Carlo class probability")
    p.add_argument("--predicate", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--samples", type=int, required=True)
    _add_common(p, random=True)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", help="estimates along a growth function")
    p.add_argument("--predicate", required=True)
    p.add_argument("--n", required=True, help="start:stop:step")
    p.add_argument("--samples", type=int, required=True)
    _add_common(p, random=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="oracle-vs-closed-form checks")
    p.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    _add_common(p, space=False, table=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("conjecture", help="(2,2)-free probability along M = floor(N^(3/2))")
    p.add_argument("--n", default="3:190")
    _add_common(p, space=False)
    p.set_defaults(func=cmd_conjecture)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if getattr(args, "m", None) is None and getattr(args, "growth", None) is None \
            and args.command in ("sample", "exact", "estimate"):
        print(f"error: {args.command} needs --m or --growth", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ArtinError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        where = exc.filename or getattr(args, "output", None) or ""
        print(f"error: I/O: {where}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
