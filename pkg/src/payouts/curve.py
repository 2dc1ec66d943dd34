"""Ideal (pre-discretization) payout curves."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ContestSpec

__all__ = [
    "IdealCurve",
    "InfeasibleCurveError",
    "sum_tolerance",
    "solve_alpha",
    "power_law_curve",
    "solve_ratio",
    "exponential_curve",
    "curve_to_text",
]

ALPHA_BRACKET = (1e-6, 64.0)
MAX_ITER = 200


class InfeasibleCurveError(ValueError):
    """No exponent distributes the prize pool with the requested top prize."""


@dataclass(frozen=True)
class IdealCurve:
    payouts: np.ndarray
    alpha: float
    kind: str = "power_law"

    def __len__(self):
        return len(self.payouts)

    def __getitem__(self, i):
        return self.payouts[i]

    @property
    def total(self) -> float:
        return float(np.sum(self.payouts))


def sum_tolerance(prize_pool: float) -> float:
    return max(0.01, 1e-9 * prize_pool)


def _check_window(spec: ContestSpec):
    n, e, p1, b = spec.winners, spec.min_payout, spec.top_prize, spec.prize_pool
    if n < 2:
        raise InfeasibleCurveError("an ideal curve needs at least 2 winners")
    spread = p1 - e
    residual = b - n * e
    if spread <= 0:
        raise InfeasibleCurveError(f"top_prize ({p1}) must exceed min_payout ({e})")
    if not spread < residual:
        raise InfeasibleCurveError(
            f"top_prize - min_payout ({spread}) must be < prize_pool - winners*min_payout "
            f"({residual}): top prize too large for the pool")
    if not residual < n * spread:
        raise InfeasibleCurveError(
            f"prize_pool - winners*min_payout ({residual}) must be < winners*(top_prize - "
            f"min_payout) ({n * spread}): pool too large for the top prize")


def _bisect(residual_at, lo, hi, tol):
    """Root of a decreasing residual function, bisected to float resolution.

    Raises unless the final residual is within ``tol``.
    """
    f_lo, f_hi = residual_at(lo), residual_at(hi)
    if not (f_lo > 0 > f_hi):
        raise InfeasibleCurveError(
            f"exponent bracket [{lo}, {hi}] does not enclose a root "
            f"(residuals {f_lo:.6g}, {f_hi:.6g})")
    best, best_f = lo, f_lo
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f = residual_at(mid)
        if abs(f) < abs(best_f):
            best, best_f = mid, f
        if f == 0:
            break
        if f > 0:
            lo = mid
        else:
            hi = mid
    if abs(best_f) > tol:
        raise InfeasibleCurveError(
            f"could not close the budget: residual {best_f:.6g} exceeds {tol:.6g}")
    return best


def solve_alpha(spec: ContestSpec) -> float:
    """Power-law exponent that spreads ``B - N*E`` as ``(P1 - E) / i**alpha``."""
    _check_window(spec)
    n, e, p1, b = spec.winners, spec.min_payout, spec.top_prize, spec.prize_pool
    ranks = np.arange(1, n + 1, dtype=np.float64)
    log_ranks = np.log(ranks)
    target = b - n * e
    spread = float(p1 - e)

    def residual(alpha):
        return spread * float(np.sum(np.exp(-alpha * log_ranks))) - target

    return _bisect(residual, *ALPHA_BRACKET, sum_tolerance(b))


def power_law_curve(spec: ContestSpec) -> IdealCurve:
    """``pi_i = E + (P1 - E) / i**alpha`` with alpha chosen so the curve sums to B."""
    alpha = solve_alpha(spec)
    ranks = np.arange(1, spec.winners + 1, dtype=np.float64)
    payouts = spec.min_payout + (spec.top_prize - spec.min_payout) * np.exp(-alpha * np.log(ranks))
    payouts[0] = spec.top_prize
    return IdealCurve(payouts, alpha, "power_law")


def solve_ratio(spec: ContestSpec) -> float:
    """Ratio ``alpha > 1`` for the geometric allocation ``(P1 - E) / alpha**(i-1)``."""
    _check_window(spec)
    n, e, p1, b = spec.winners, spec.min_payout, spec.top_prize, spec.prize_pool
    steps = np.arange(n, dtype=np.float64)
    target = b - n * e
    spread = float(p1 - e)

    def residual(ratio):
        return spread * float(np.sum(np.exp(-np.log(ratio) * steps))) - target

    return _bisect(residual, 1.0 + 1e-12, 1e6, sum_tolerance(b))


def exponential_curve(spec: ContestSpec) -> IdealCurve:
    ratio = solve_ratio(spec)
    steps = np.arange(spec.winners, dtype=np.float64)
    payouts = spec.min_payout + (spec.top_prize - spec.min_payout) * np.exp(-np.log(ratio) * steps)
    payouts[0] = spec.top_prize
    return IdealCurve(payouts, ratio, "exponential")


def curve_to_text(curve: IdealCurve) -> str:
    """Two whitespace-separated columns, rank and payout, under a header row."""
    lines = ["rank payout"]
    lines += [f"{i} {p:.6f}" for i, p in enumerate(curve.payouts, start=1)]
    return "\n".join(lines) + "\n"
