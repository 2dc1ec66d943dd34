"""Reading contest specs and suites, rendering and parsing payout tables."""
from __future__ import annotations

import csv
import io
import json
import os
from importlib import resources
from typing import Any, Mapping

from .core import ContestSpec, PayoutStructure
from .nice import nice_ceil

__all__ = [
    "spec_from_dict",
    "load_spec",
    "load_suite",
    "bundled_suite",
    "structure_to_csv",
    "structure_from_csv",
    "structure_to_text",
]

_FIELDS = ("prize_pool", "top_prize", "min_payout", "winners", "max_buckets", "singleton_buckets")


def spec_from_dict(d: Mapping[str, Any]) -> ContestSpec:
    """Build a spec; ``entry_fee`` may stand in for ``min_payout``.

    With an entry fee the minimum payout is the smallest nice number at or
    above 1.5 times the fee.
    """
    d = dict(d)
    if "min_payout" not in d:
        if "entry_fee" not in d:
            raise ValueError("spec needs min_payout or entry_fee")
        d["min_payout"] = nice_ceil(1.5 * float(d["entry_fee"]))
    missing = [k for k in _FIELDS[:5] if k not in d]
    if missing:
        raise ValueError(f"spec is missing {', '.join(missing)}")
    kwargs = {}
    for k in _FIELDS:
        if k in d:
            v = d[k]
            if isinstance(v, float) and not v.is_integer():
                raise ValueError(f"{k} must be a whole number, got {v}")
            kwargs[k] = int(v)
    return ContestSpec(**kwargs)


def load_spec(path: str | os.PathLike) -> ContestSpec:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return spec_from_dict(data)


def _suite_rows(data) -> list[dict]:
    if not isinstance(data, list):
        raise ValueError("a suite is a JSON array of spec objects")
    rows = []
    for n, item in enumerate(data, 1):
        item = dict(item)
        label = str(item.pop("label", f"contest {n}"))
        reference = item.pop("reported", None)
        rows.append({"label": label, "spec": item, "reference": reference})
    return rows


def load_suite(path: str | os.PathLike) -> list[dict]:
    """Suite entries as ``{"label", "spec" (raw dict), "reference"}``.

    Specs are left unparsed so one bad entry doesn't sink the whole run.
    """
    with open(path) as fh:
        return _suite_rows(json.load(fh))


def bundled_suite() -> list[dict]:
    """The 25 real-world contests shipped with the package."""
    text = resources.files("payouts.data").joinpath("contests.json").read_text()
    return _suite_rows(json.loads(text))


def structure_to_csv(structure: PayoutStructure) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["place_from", "place_to", "prize"])
    for row in structure.ranges():
        w.writerow(row)
    return buf.getvalue()


def structure_from_csv(text: str) -> PayoutStructure:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["place_from", "place_to", "prize"]:
        raise ValueError("expected columns place_from, place_to, prize")
    pairs = []
    expect = 1
    for rec in reader:
        lo, hi, prize = int(rec["place_from"]), int(rec["place_to"]), int(rec["prize"])
        if lo != expect or hi < lo:
            raise ValueError(f"places {lo}-{hi} do not continue from {expect - 1}")
        pairs.append((hi - lo + 1, prize))
        expect = hi + 1
    return PayoutStructure.from_pairs(pairs)


def structure_to_text(structure: PayoutStructure) -> str:
    """Aligned table with a totals line recomputed from the rows."""
    rows = []
    for lo, hi, prize in structure.ranges():
        places = str(lo) if lo == hi else f"{lo}-{hi}"
        n = hi - lo + 1
        rows.append((places, f"{n}", f"${prize:,}", f"${n * prize:,}"))
    winners = sum(b.size for b in structure.buckets)
    total = sum(b.size * b.prize for b in structure.buckets)
    head = ("places", "winners", "prize", "subtotal")
    foot = ("total", f"{winners}", "", f"${total:,}")
    widths = [max(len(r[i]) for r in [head, foot, *rows]) for i in range(4)]

    def fmt(r):
        return "  ".join([r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])])

    rule = "  ".join("-" * w for w in widths)
    return "\n".join([fmt(head), rule, *map(fmt, rows), rule, fmt(foot)]) + "\n"
