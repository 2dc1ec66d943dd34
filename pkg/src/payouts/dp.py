"""Exact dynamic program over (winners, budget, last prize, last size) states.

Buckets are laid down from the bottom of the table up.  Because the winner
count is a hard constraint, a bucket placed after ``w`` winners are already
consumed covers places ``N - w - size + 1 .. N - w``, so its squared error is
known the moment it is chosen.  Every transition keeps prizes strictly rising,
sizes non-increasing (going up) and the budget within the pool; a state is
complete once it has consumed exactly ``N`` winners and ``B`` dollars.

Only desk-sized instances are practical -- the state space is pseudo-polynomial.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .core import ContestSpec, PayoutStructure, cost
from .nice import enumerate_nice

__all__ = ["DpState", "DpEntry", "InstanceTooLarge", "DpResult", "dp_solve", "dp_search"]

STATE_BUDGET = 10**8


class InstanceTooLarge(RuntimeError):
    """Raised when N * B * (number of prize choices) exceeds the state budget."""


@dataclass(frozen=True, order=True)
class DpState:
    winners_consumed: int
    budget_consumed: int
    last_prize: int  # prize of the most recently placed (highest so far) bucket
    last_size: int


@dataclass
class DpEntry:
    best_cost: float
    best_choice: tuple[int, int] | None  # (size, prize) of the bucket that led here
    parent: "DpEntry | None"
    buckets: int


@dataclass(frozen=True)
class DpResult:
    structure: PayoutStructure | None
    cost: float
    states: int

    @property
    def feasible(self) -> bool:
        return self.structure is not None


def dp_search(spec: ContestSpec, curve, max_prize: int | None = None,
              state_budget: int = STATE_BUDGET) -> DpResult:
    """Run the dynamic program and return the optimum with bookkeeping."""
    pi = np.asarray(getattr(curve, "payouts", curve), dtype=np.float64)
    n, budget, r = spec.winners, spec.prize_pool, spec.max_buckets
    if len(pi) != n:
        raise ValueError(f"curve has {len(pi)} places but the contest has {n} winners")
    top = spec.top_prize if max_prize is None else max_prize
    ladder = enumerate_nice(max(1, spec.min_payout), min(top, budget))
    if n * budget * max(1, len(ladder)) > state_budget:
        raise InstanceTooLarge(
            f"N*B*prizes = {n * budget * len(ladder)} exceeds the state budget {state_budget}")
    if not ladder:
        return DpResult(None, float("inf"), 0)
    p_max = ladder[-1]

    def bucket_error(w, size, prize):
        # places N-w-size .. N-w-1 (0-based)
        seg = pi[n - w - size:n - w]
        return float(np.sum((seg - prize) ** 2))

    # level 1: the bottom bucket
    level: dict[DpState, DpEntry] = {}
    finals: list[tuple[tuple, DpState, DpEntry]] = []
    seen = 0

    def offer(table, state, entry):
        old = table.get(state)
        if old is None or entry.best_cost < old.best_cost:
            table[state] = entry

    def viable(w, b, prize_idx):
        rest = n - w
        if rest == 0:
            return b == budget
        if prize_idx + 1 >= len(ladder):
            return False
        # everyone above earns at least the next prize up and at most the top prize
        return b + rest * ladder[prize_idx + 1] <= budget <= b + rest * p_max

    for k, p in enumerate(ladder):
        for s in range(1, n + 1):
            b = s * p
            if b > budget:
                break
            if not viable(s, b, k):
                continue
            st = DpState(s, b, p, s)
            offer(level, st, DpEntry(bucket_error(0, s, p), (s, p), None, 1))

    depth = 1
    while level:
        seen += len(level)
        nxt: dict[DpState, DpEntry] = {}
        for st, entry in sorted(level.items()):
            if st.winners_consumed == n:
                key = (entry.best_cost, entry.buckets, -st.last_size, st.last_prize)
                finals.append((key, st, entry))
                continue
            if depth >= r:
                continue
            k0 = bisect.bisect_right(ladder, st.last_prize)
            for k in range(k0, len(ladder)):
                p = ladder[k]
                for s in range(1, min(st.last_size, n - st.winners_consumed) + 1):
                    w = st.winners_consumed + s
                    b = st.budget_consumed + s * p
                    if b > budget:
                        break
                    if not viable(w, b, k):
                        continue
                    c = entry.best_cost + bucket_error(st.winners_consumed, s, p)
                    offer(nxt, DpState(w, b, p, s), DpEntry(c, (s, p), entry, depth + 1))
        level = nxt
        depth += 1

    if not finals:
        return DpResult(None, float("inf"), seen)
    _, st, entry = min(finals, key=lambda t: t[0])
    pairs = []
    while entry is not None:
        pairs.append(entry.best_choice)
        entry = entry.parent
    # built bottom-up, so the last choice found is the top bucket
    structure = PayoutStructure.from_pairs(pairs)
    return DpResult(structure, cost(structure, pi), seen)


def dp_solve(spec: ContestSpec, curve, max_prize: int | None = None,
             state_budget: int = STATE_BUDGET) -> PayoutStructure | None:
    """Cost-minimal structure meeting every hard constraint, or ``None`` if none exists.

    Prizes range over nice numbers in ``[E, max_prize]`` (``max_prize``
    defaults to the contest's top prize).
    """
    return dp_search(spec, curve, max_prize, state_budget).structure
