"""Brute-force enumeration of every valid payout structure for toy contests.

Deliberately naive: it shares no search logic with the solvers so it can serve
as ground truth for them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import ContestSpec, PayoutStructure, cost
from .nice import enumerate_nice

__all__ = ["EnumerationBudget", "BudgetExceeded", "enumerate_all", "size_profiles"]


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EnumerationBudget:
    max_candidates: int = 10**7

    def __post_init__(self):
        if self.max_candidates < 1:
            raise ValueError("max_candidates must be positive")


def size_profiles(n: int, k: int, smallest: int = 1):
    """Non-decreasing tuples of ``k`` positive sizes summing to ``n``."""
    if k == 1:
        if n >= smallest:
            yield (n,)
        return
    for first in range(smallest, n // k + 1):
        for rest in size_profiles(n - first, k - 1, first):
            yield (first,) + rest


def enumerate_all(spec: ContestSpec, curve, budget: EnumerationBudget | int | None = None,
                  max_prize: int | None = None) -> list[tuple[PayoutStructure, float]]:
    """Every structure meeting all hard constraints, with its cost, cheapest first.

    Prizes are nice numbers between ``E`` and ``max_prize`` (the contest's top
    prize unless given).  Raises :class:`BudgetExceeded` once more than the
    budgeted number of (sizes, prizes) candidates would be examined.
    """
    if budget is None:
        budget = EnumerationBudget()
    elif isinstance(budget, int):
        budget = EnumerationBudget(budget)
    top = spec.top_prize if max_prize is None else max_prize
    ladder = sorted(enumerate_nice(max(1, spec.min_payout), top), reverse=True)
    found = []
    examined = 0
    for k in range(1, spec.max_buckets + 1):
        for sizes in size_profiles(spec.winners, k):
            for prizes in itertools.combinations(ladder, k):
                examined += 1
                if examined > budget.max_candidates:
                    raise BudgetExceeded(
                        f"more than {budget.max_candidates} candidates to enumerate")
                if sum(s * p for s, p in zip(sizes, prizes)) != spec.prize_pool:
                    continue
                st = PayoutStructure.from_pairs(zip(sizes, prizes))
                found.append((st, cost(st, curve)))
    found.sort(key=lambda t: (t[1], t[0].pairs()))
    return found
