"""Nice-number arithmetic.

A prize is *nice* when it can be written as ``A * 10**K`` with ``1 <= A <= 1000``
and the mantissa obeys a divisibility ladder: multiples of 5 from 10 upward,
of 25 from 100 upward and of 50 from 250 upward.  Zero is never nice.
"""
from __future__ import annotations

import bisect
import math

__all__ = ["MANTISSAS", "is_nice", "nice_floor", "nice_ceil", "enumerate_nice"]


def _valid_mantissa(a: int) -> bool:
    if a < 1 or a > 1000:
        return False
    if a >= 10 and a % 5:
        return False
    if a >= 100 and a % 25:
        return False
    if a >= 250 and a % 50:
        return False
    return True


#: Every admissible mantissa in [1, 1000], ascending (49 values).
MANTISSAS: tuple[int, ...] = tuple(a for a in range(1, 1001) if _valid_mantissa(a))


def is_nice(x: int) -> bool:
    """Return True if the integer dollar amount ``x`` is a nice number."""
    if x < 0:
        raise ValueError(f"nice-number test needs a nonnegative amount, got {x}")
    if x != int(x):
        return False
    a = int(x)
    if a == 0:
        return False
    # Stripping every factor of 10 is equivalent to searching all (A, K) pairs.
    while a % 10 == 0:
        a //= 10
    return _valid_mantissa(a)


def _powers(n: int):
    p = 1
    while p <= n:
        yield p
        p *= 10


def nice_floor(x: float) -> int:
    """Largest nice number that does not exceed ``x``.

    Real inputs are accepted since ideal payouts are real-valued.
    """
    if not x >= 1:
        raise ValueError(f"no nice number lies at or below {x!r}")
    n = math.floor(x)
    best = 1
    for p in _powers(n):
        cap = min(n // p, 1000)
        i = bisect.bisect_right(MANTISSAS, cap)
        best = max(best, MANTISSAS[i - 1] * p)
    return best


def nice_ceil(x: float) -> int:
    """Smallest nice number that is at least ``x``."""
    if x < 0:
        raise ValueError(f"nice_ceil needs a nonnegative amount, got {x!r}")
    n = max(1, math.ceil(x))
    best = None
    p = 1
    while p <= 10 * n:
        need = -(-n // p)
        i = bisect.bisect_left(MANTISSAS, need)
        if i < len(MANTISSAS):
            cand = MANTISSAS[i] * p
            if best is None or cand < best:
                best = cand
        p *= 10
    return best


def enumerate_nice(lo: int, hi: int) -> list[int]:
    """All nice numbers in the closed range ``[lo, hi]``, ascending."""
    if lo > hi:
        return []
    lo = max(lo, 1)
    out = set()
    for p in _powers(hi):
        for a in MANTISSAS:
            v = a * p
            if v > hi:
                break
            if v >= lo:
                out.add(v)
    return sorted(out)
