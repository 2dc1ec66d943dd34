"""Contest parameters, the payout-structure data model, validation and cost."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .nice import is_nice, nice_floor

__all__ = [
    "ContestSpec",
    "Bucket",
    "PayoutStructure",
    "Violation",
    "ViolationReport",
    "VIOLATION_KINDS",
    "validate",
    "constraint_cost",
    "cost",
    "expand",
    "rebucket",
]

VIOLATION_KINDS = (
    "budget",
    "prize_monotonicity",
    "bucket_size_monotonicity",
    "nice_number",
    "min_payout",
    "winner_count",
    "bucket_count",
)


@dataclass(frozen=True)
class ContestSpec:
    """Inputs of one contest.  All money is in whole dollars."""

    prize_pool: int
    top_prize: int
    min_payout: int
    winners: int
    max_buckets: int
    singleton_buckets: int = 4

    def __post_init__(self):
        for name in ("prize_pool", "top_prize", "min_payout", "winners",
                     "max_buckets", "singleton_buckets"):
            if int(getattr(self, name)) != getattr(self, name):
                raise ValueError(f"{name} must be an integer")
        if self.winners < 1:
            raise ValueError("winners must be positive")
        if self.max_buckets < 1:
            raise ValueError("max_buckets must be positive")
        if self.singleton_buckets < 1:
            raise ValueError("singleton_buckets must be positive")
        if self.min_payout < 0:
            raise ValueError("min_payout must be nonnegative")
        if self.winners * self.min_payout > self.prize_pool:
            raise ValueError(
                f"winners * min_payout = {self.winners * self.min_payout} "
                f"exceeds prize_pool = {self.prize_pool}")
        if not self.min_payout <= self.top_prize <= self.prize_pool:
            raise ValueError(
                "need min_payout <= top_prize <= prize_pool, got "
                f"{self.min_payout}, {self.top_prize}, {self.prize_pool}")

    # short aliases matching the usual notation
    @property
    def B(self) -> int:
        return self.prize_pool

    @property
    def P1(self) -> int:
        return self.top_prize

    @property
    def E(self) -> int:
        return self.min_payout

    @property
    def N(self) -> int:
        return self.winners

    @property
    def r(self) -> int:
        return self.max_buckets

    @property
    def warnings(self) -> list[str]:
        out = []
        if not is_nice(self.top_prize):
            out.append(f"top_prize {self.top_prize} is not a nice number")
        if not is_nice(self.min_payout):
            out.append(f"min_payout {self.min_payout} is not a nice number")
        return out


@dataclass(frozen=True)
class Bucket:
    size: int
    prize: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"bucket size must be >= 1, got {self.size}")
        if self.prize < 1:
            raise ValueError(f"bucket prize must be >= 1, got {self.prize}")


@dataclass(frozen=True)
class PayoutStructure:
    """Buckets in rank order; bucket j covers the next ``size`` places."""

    buckets: tuple[Bucket, ...]

    def __post_init__(self):
        object.__setattr__(self, "buckets", tuple(self.buckets))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "PayoutStructure":
        """Build from ``(size, prize)`` pairs."""
        return cls(tuple(Bucket(int(s), int(p)) for s, p in pairs))

    def pairs(self) -> list[tuple[int, int]]:
        return [(b.size, b.prize) for b in self.buckets]

    @property
    def sizes(self) -> list[int]:
        return [b.size for b in self.buckets]

    @property
    def prizes(self) -> list[int]:
        return [b.prize for b in self.buckets]

    @property
    def winners(self) -> int:
        return sum(b.size for b in self.buckets)

    @property
    def total(self) -> int:
        return sum(b.size * b.prize for b in self.buckets)

    def ranges(self) -> list[tuple[int, int, int]]:
        """``(place_from, place_to, prize)`` for each bucket, 1-based inclusive."""
        out, start = [], 1
        for b in self.buckets:
            out.append((start, start + b.size - 1, b.prize))
            start += b.size
        return out

    def __len__(self):
        return len(self.buckets)


@dataclass(frozen=True)
class Violation:
    kind: str
    magnitude: int
    bucket: int | None = None  # 0-based index of the offending bucket, if any


@dataclass(frozen=True)
class ViolationReport:
    items: tuple[Violation, ...] = ()
    constraint_cost: int = 0

    def __bool__(self):
        # truthy when something is wrong
        return bool(self.items)

    @property
    def ok(self) -> bool:
        return not self.items

    def count(self, kind: str) -> int:
        return sum(1 for v in self.items if v.kind == kind)

    def kinds(self) -> set[str]:
        return {v.kind for v in self.items}

    def summary(self) -> str:
        if not self.items:
            return "no violations"
        parts = []
        for v in self.items:
            where = f" (bucket {v.bucket + 1})" if v.bucket is not None else ""
            parts.append(f"{v.kind}{where}: {v.magnitude}")
        return "; ".join(parts) + f"; constraint cost {self.constraint_cost}"


def constraint_cost(sizes: Sequence[int], n_winners: int) -> int:
    """Weighted violation score used to rank heuristic completions.

    100 per missing winner, 1 per extra winner, 10 per unit by which a bucket
    is larger than the one below it.
    """
    total = sum(sizes)
    c = 100 * max(0, n_winners - total) + max(0, total - n_winners)
    c += 10 * sum(max(0, a - b) for a, b in zip(sizes, sizes[1:]))
    return c


def validate(structure: PayoutStructure, spec: ContestSpec) -> ViolationReport:
    """Report every way ``structure`` breaks the payout constraints for ``spec``."""
    if not structure.buckets:
        raise ValueError("cannot validate an empty payout structure")
    items: list[Violation] = []
    sizes, prizes = structure.sizes, structure.prizes

    if structure.total != spec.prize_pool:
        items.append(Violation("budget", abs(structure.total - spec.prize_pool)))
    for j in range(len(prizes) - 1):
        if prizes[j + 1] >= prizes[j]:
            items.append(Violation("prize_monotonicity", prizes[j + 1] - prizes[j] + 1, j + 1))
    for j in range(len(sizes) - 1):
        if sizes[j] > sizes[j + 1]:
            items.append(Violation("bucket_size_monotonicity", sizes[j] - sizes[j + 1], j))
    for j, p in enumerate(prizes):
        if not is_nice(p):
            items.append(Violation("nice_number", p - nice_floor(p), j))
    low = min(prizes)
    if low < spec.min_payout:
        items.append(Violation("min_payout", spec.min_payout - low, prizes.index(low)))
    if structure.winners != spec.winners:
        items.append(Violation("winner_count", abs(structure.winners - spec.winners)))
    if len(structure) > spec.max_buckets:
        items.append(Violation("bucket_count", len(structure) - spec.max_buckets))
    return ViolationReport(tuple(items), constraint_cost(sizes, spec.winners))


def expand(structure: PayoutStructure) -> list[int]:
    """Per-place prize list in rank order."""
    out: list[int] = []
    for b in structure.buckets:
        out.extend([b.prize] * b.size)
    return out


def rebucket(prizes: Sequence[int]) -> PayoutStructure:
    """Group runs of equal adjacent prizes back into buckets."""
    pairs: list[list[int]] = []
    for p in prizes:
        if pairs and pairs[-1][1] == p:
            pairs[-1][0] += 1
        else:
            pairs.append([1, int(p)])
    return PayoutStructure.from_pairs(pairs)


def _as_array(curve) -> np.ndarray:
    values = getattr(curve, "payouts", curve)
    return np.asarray(values, dtype=np.float64)


def cost(structure: PayoutStructure, curve) -> float:
    """Sum of squared differences between the per-place prizes and the ideal curve.

    The shorter vector is padded with zeros, so extra or missing winners are
    charged their full payout.
    """
    ideal = _as_array(curve)
    paid = np.asarray(expand(structure), dtype=np.float64)
    n = max(len(ideal), len(paid))
    a = np.zeros(n)
    b = np.zeros(n)
    a[: len(ideal)] = ideal
    b[: len(paid)] = paid
    # np.sum is pairwise, which keeps large curves accurate
    return float(np.sum((a - b) ** 2))
