"""Command-line front end: generate a payout table, benchmark a suite, export a curve.

    payouts generate contest.json [--solver heuristic|dp|ilp-export] [--format csv|text]
    payouts bench [suite.json] [--solver ...] [--format csv|text]
    payouts curve contest.json [--curve power|exp]
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from dataclasses import dataclass, replace

import numpy as np

from . import dp, heuristic, ilp
from .core import ContestSpec, PayoutStructure, ViolationReport, cost, validate
from .curve import IdealCurve, curve_to_text, exponential_curve, power_law_curve
from .tables import (bundled_suite, load_spec, load_suite, spec_from_dict, structure_to_csv,
                     structure_to_text)

__all__ = ["HARD_VIOLATIONS", "BenchRow", "ideal_curve", "solve", "run_bench",
           "bench_to_csv", "bench_to_text", "main"]

SOLVERS = ("heuristic", "dp", "ilp-export")
# a table breaking one of these must never be published
HARD_VIOLATIONS = frozenset({"budget", "prize_monotonicity"})


def ideal_curve(spec: ContestSpec, kind: str = "power") -> IdealCurve:
    if spec.winners == 1:
        return IdealCurve(payouts=np.array([float(spec.top_prize)]),
                          alpha=float("nan"), kind="single")
    if kind == "power":
        return power_law_curve(spec)
    if kind == "exp":
        return exponential_curve(spec)
    raise ValueError(f"unknown curve kind {kind!r}")


def solve(spec: ContestSpec, curve, solver: str = "heuristic") -> PayoutStructure:
    """Structure from the named solver (``ilp-export`` is not a solver here)."""
    if spec.winners == 1:
        # nothing to discretise: the single winner takes the pool
        return PayoutStructure.from_pairs([(1, spec.prize_pool)])
    if solver == "heuristic":
        return heuristic.solve(spec, curve).structure
    if solver == "dp":
        found = dp.dp_solve(spec, curve)
        if found is None:
            raise ValueError("no payout structure satisfies every constraint")
        return found
    raise ValueError(f"unknown solver {solver!r}")


@dataclass
class BenchRow:
    label: str
    spec: ContestSpec | None
    solver: str
    cost: float = math.nan
    runtime_ms: int = 0
    extra_winners: int = 0
    violations: ViolationReport | None = None
    status: str = "ok"

    @property
    def distance(self) -> float:
        return math.sqrt(self.cost) if self.cost >= 0 else math.nan


def _bench_one(label, raw, solver) -> BenchRow:
    try:
        spec = spec_from_dict(raw)
    except (ValueError, TypeError) as e:
        return BenchRow(label, None, solver, status=f"error: {e}")
    row = BenchRow(label, spec, solver)
    try:
        curve = ideal_curve(spec)
        if solver == "ilp-export":
            t0 = time.perf_counter()
            ilp.export_lp(ilp.build(spec, curve))
            row.runtime_ms = round((time.perf_counter() - t0) * 1000)
            row.status = "exported"
            return row
        t0 = time.perf_counter()
        structure = solve(spec, curve, solver)
        row.runtime_ms = round((time.perf_counter() - t0) * 1000)
    except Exception as e:  # one contest failing must not stop the run
        row.status = f"error: {type(e).__name__}: {e}"
        return row
    # recomputed here rather than trusted from the solver
    row.cost = cost(structure, curve)
    row.violations = validate(structure, spec)
    row.extra_winners = structure.winners - spec.winners
    return row


def run_bench(suite: list[dict], solvers=("heuristic",)) -> list[BenchRow]:
    return [_bench_one(item["label"], item["spec"], s) for item in suite for s in solvers]


_BENCH_COLUMNS = ("label", "solver", "status", "cost", "distance", "runtime_ms",
                  "extra_winners", "violations")


def _bench_record(row: BenchRow) -> list[str]:
    viol = "" if row.violations is None else ";".join(
        f"{v.kind}={v.magnitude}" for v in row.violations.items)
    return [row.label, row.solver, row.status,
            "" if math.isnan(row.cost) else f"{row.cost:.6g}",
            "" if math.isnan(row.cost) else f"{row.distance:.6g}",
            str(row.runtime_ms), str(row.extra_winners), viol]


def bench_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_BENCH_COLUMNS)
    w.writerows(_bench_record(r) for r in rows)
    return buf.getvalue()


def bench_to_text(rows: list[BenchRow]) -> str:
    recs = [list(_BENCH_COLUMNS)] + [_bench_record(r) for r in rows]
    widths = [max(len(r[i]) for r in recs) for i in range(len(_BENCH_COLUMNS))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in recs) + "\n"


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args) -> ContestSpec:
    spec = load_spec(args.spec)
    if args.singletons is not None:
        spec = replace(spec, singleton_buckets=args.singletons)
    return spec


def cmd_generate(args) -> int:
    spec = _load(args)
    curve = ideal_curve(spec, args.curve)
    if args.solver == "ilp-export":
        model = ilp.build(spec, curve)
        if args.solution is None:
            _emit(ilp.export_lp(model), args.out)
            return 0
        with open(args.solution) as fh:
            structure = ilp.import_solution(model, ilp.read_solution(fh.read()))
    else:
        structure = solve(spec, curve, args.solver)
    report = validate(structure, spec)
    body = structure_to_csv(structure) if args.format == "csv" else structure_to_text(structure)
    _emit(body, args.out)
    c = cost(structure, curve)
    print(f"cost {c:.6g} (distance {math.sqrt(c):.6g})", file=sys.stderr)
    for w in spec.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"violations: {report.summary()}", file=sys.stderr)
    return 1 if report.kinds() & HARD_VIOLATIONS else 0


def cmd_bench(args) -> int:
    suite = load_suite(args.suite) if args.suite else bundled_suite()
    rows = run_bench(suite, args.solver or ["heuristic"])
    _emit(bench_to_csv(rows) if args.format == "csv" else bench_to_text(rows), args.out)
    return 0


def cmd_curve(args) -> int:
    spec = _load(args)
    _emit(curve_to_text(ideal_curve(spec, args.curve)), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="payouts", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="solve one contest and print its payout table")
    g.add_argument("spec", help="contest spec (JSON)")
    g.add_argument("--solver", choices=SOLVERS, default="heuristic")
    g.add_argument("--solution", help="with ilp-export: import this solver solution file")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("bench", help="run solvers over a suite of contests")
    b.add_argument("suite", nargs="?", help="suite file (JSON array); default: bundled contests")
    b.add_argument("--solver", choices=SOLVERS, action="append")
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("curve", help="write the ideal payout curve as rank/payout columns")
    c.add_argument("spec", help="contest spec (JSON)")
    c.set_defaults(func=cmd_curve)

    for p in (g, b, c):
        p.add_argument("--out", help="write here instead of stdout")
    for p in (g, b):
        p.add_argument("--format", choices=("csv", "text"), default="text")
    for p in (g, c):
        p.add_argument("--curve", choices=("power", "exp"), default="power")
        p.add_argument("--singletons", type=int, help="override the singleton bucket count")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as e:
        print(f"payouts {args.command}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
