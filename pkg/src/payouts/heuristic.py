"""Four-stage payout heuristic.

1. geometric bucket sizes after a run of singleton buckets,
2. nice-number prizes per bucket, carrying the rounding leftover downward,
3. repair of non-monotone bucket sizes created by merges,
4. spending the leftover on the upper singletons and then the bottom buckets.

The result always pays out exactly the prize pool; when that is impossible
with nice numbers and exactly ``N`` winners the output carries reported
violations instead of failing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import ContestSpec, PayoutStructure, ViolationReport, constraint_cost, cost, validate
from .nice import enumerate_nice, is_nice, nice_ceil, nice_floor

__all__ = [
    "HeuristicError",
    "HeuristicState",
    "HeuristicResult",
    "solve_beta",
    "stage1_bucket_sizes",
    "stage2_init_prizes",
    "stage3_repair_sizes",
    "stage4_spend_leftover",
    "solve",
]

BETA_STEP = 1.05
BETA_ATTEMPTS = 200
MAX_COMPLETIONS = 10**7
# extra winners tried by the three-bucket completion
MAX_EXTRA = 20
# constraint-cost charge per non-nice prize when ranking stage-4 candidates
NICE_PENALTY = 10


class HeuristicError(RuntimeError):
    pass


@dataclass
class HeuristicState:
    sizes: list[int]
    prizes: list[int]
    leftover: float = 0.0
    beta: float = 1.0
    # R_t per bucket from stage 2, kept for inspection
    rounds: list[float] = field(default_factory=list)

    def copy(self) -> "HeuristicState":
        return replace(self, sizes=list(self.sizes), prizes=list(self.prizes),
                       rounds=list(self.rounds))

    @property
    def spent(self) -> int:
        return sum(s * p for s, p in zip(self.sizes, self.prizes))

    def structure(self) -> PayoutStructure:
        return PayoutStructure.from_pairs(zip(self.sizes, self.prizes))


@dataclass(frozen=True)
class HeuristicResult:
    structure: PayoutStructure
    report: ViolationReport
    extra_winners: int
    beta: float = 1.0


def solve_beta(n_remaining: int, terms: int) -> float:
    """Growth factor with ``beta + beta**2 + ... + beta**terms == n_remaining``."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    if n_remaining < terms:
        raise ValueError(
            f"cannot spread {n_remaining} winners over {terms} growing buckets (beta < 1)")
    k = np.arange(1, terms + 1, dtype=np.float64)

    def excess(beta):
        return float(np.sum(beta ** k)) - n_remaining

    lo, hi = 1.0, 2.0
    while excess(hi) < 0:
        hi *= 2.0
    if excess(lo) >= 0:
        return 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if excess(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo if abs(excess(lo)) <= abs(excess(hi)) else hi


def _grow_sizes(n: int, singletons: int, beta: float, cap: int | None) -> list[int]:
    sizes = [1] * singletons
    total = singletons
    if n - total == 1:
        return sizes + [1]
    while total < n:
        last = sizes[-1]
        step = math.ceil(beta * last)
        step2 = math.ceil(beta * beta * last)
        forced = cap is not None and len(sizes) >= cap - 2
        if forced or step + total > n or step2 + step + total > n:
            # split whatever is left over one or two final buckets
            rem = n - total
            half = rem // 2
            if half >= last and (cap is None or len(sizes) + 2 <= cap):
                sizes += [half, rem - half]
            else:
                sizes.append(rem)
            break
        sizes.append(step)
        total += step
    return sizes


def stage1_bucket_sizes(spec: ContestSpec, beta: float | None = None) -> tuple[list[int], float]:
    """Tentative non-decreasing bucket sizes and the growth factor used.

    With ``beta=None`` the factor is solved from the bucket budget and raised
    by 5% steps until no more than ``max_buckets`` buckets come out.
    """
    n, r, single = spec.winners, spec.max_buckets, spec.singleton_buckets
    if n <= min(single, r):
        return [1] * n, 1.0
    # a bucket budget too small for the singleton run shortens the run
    single = min(single, r - 1)
    if single == 0:
        return [n], 1.0
    if beta is not None:
        return _grow_sizes(n, single, beta, r), beta

    terms = max(1, min(r - single, n - single))
    beta = solve_beta(n - single, terms)
    for _ in range(BETA_ATTEMPTS):
        sizes = _grow_sizes(n, single, beta, None)
        if len(sizes) <= r:
            return sizes, beta
        beta *= BETA_STEP
    return _grow_sizes(n, single, beta, r), beta


def stage2_init_prizes(sizes, curve, beta: float = 1.0, keep_singletons: int = 0,
                       min_prize: int = 1) -> HeuristicState:
    """Round bucket averages down to nice numbers, carrying the remainder.

    A bucket whose rounded prize reaches the one above is merged into it,
    except within the first ``keep_singletons`` buckets: those are guaranteed
    their own prize, so it steps down to the next nice number instead (as
    long as that stays at or above ``min_prize``).
    """
    pi = np.asarray(getattr(curve, "payouts", curve), dtype=np.float64)
    if sum(sizes) != len(pi):
        raise ValueError(f"bucket sizes cover {sum(sizes)} places, curve has {len(pi)}")
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    out_sizes = [sizes[0]]
    first = float(np.sum(pi[: sizes[0]]))
    if first / sizes[0] < 1:
        raise HeuristicError("budget exhausted: top bucket averages below $1")
    out_prizes = [nice_floor(first / sizes[0])]
    leftover = first - sizes[0] * out_prizes[0]
    rounds = [first]
    for t in range(1, len(sizes)):
        size = sizes[t]
        r_t = float(np.sum(pi[bounds[t]:bounds[t + 1]])) + leftover
        rounds.append(r_t)
        if r_t / size < 1:
            raise HeuristicError(f"budget exhausted at bucket {t + 1}")
        prize = nice_floor(r_t / size)
        if prize >= out_prizes[-1] and t < keep_singletons and out_prizes[-1] > 1:
            lower = nice_floor(out_prizes[-1] - 1)
            if lower >= min_prize:
                prize = lower
        if prize >= out_prizes[-1]:
            out_sizes[-1] += size
            leftover = r_t - size * out_prizes[-1]
        else:
            out_sizes.append(size)
            out_prizes.append(prize)
            leftover = r_t - size * prize
    return HeuristicState(out_sizes, out_prizes, leftover, beta, rounds)


def stage3_repair_sizes(state: HeuristicState) -> HeuristicState:
    """Push users down into the next bucket until sizes are non-decreasing."""
    st = state.copy()
    sizes, prizes = st.sizes, st.prizes
    changed = True
    while changed:
        changed = False
        for t in range(len(sizes) - 1):
            gap = sizes[t] - sizes[t + 1]
            if gap > 0:
                moved = (gap + 1) // 2
                sizes[t] -= moved
                sizes[t + 1] += moved
                st.leftover += moved * (prizes[t] - prizes[t + 1])
                changed = True
    return st


def _merge_last(sizes, prizes):
    sizes[-2] += sizes[-1]
    sizes.pop()
    prizes.pop()


class _TailCost:
    """Squared error of the bottom of a structure, with zero extension past N."""

    def __init__(self, curve):
        pi = np.asarray(getattr(curve, "payouts", curve), dtype=np.float64)
        self.n = len(pi)
        self.c1 = np.concatenate([[0.0], np.cumsum(pi)])
        self.c2 = np.concatenate([[0.0], np.cumsum(pi * pi)])

    def segment(self, start, stop, prize):
        """Cost of paying ``prize`` on places ``[start, stop)`` (0-based), vectorised."""
        n = self.n
        start = np.asarray(start)
        stop = np.asarray(stop)
        a = np.minimum(start, n)
        b = np.minimum(stop, n)
        inside = b - a
        s1 = self.c1[b] - self.c1[a]
        s2 = self.c2[b] - self.c2[a]
        beyond = (stop - start) - inside
        prize = np.asarray(prize, dtype=np.float64)
        return s2 - 2 * prize * s1 + prize * prize * inside + prize * prize * beyond

    def unpaid(self, start):
        start = np.minimum(np.asarray(start), self.n)
        return self.c2[self.n] - self.c2[start]


def _kept(sizes, prizes, drop, tail):
    """Split off the bottom ``drop`` buckets; summarise what stays fixed."""
    keep_sizes, keep_prizes = sizes[:len(sizes) - drop], prizes[:len(prizes) - drop]
    money = sum(a * b for a, b in zip(sizes[len(keep_sizes):], prizes[len(keep_prizes):]))
    bounds = np.concatenate([[0], np.cumsum(keep_sizes, dtype=np.int64)])
    err = sum(float(tail.segment(bounds[j], bounds[j + 1], keep_prizes[j]))
              for j in range(len(keep_sizes)))
    return dict(
        sizes=keep_sizes,
        prizes=keep_prizes,
        money=money,
        placed=int(bounds[-1]),
        prev_size=keep_sizes[-1] if keep_sizes else 0,
        violation=10 * sum(max(0, a - b) for a, b in zip(keep_sizes, keep_sizes[1:])),
        ugly=sum(not is_nice(x) for x in keep_prizes),
        err=err,
    )


def _score(c, ugly, err):
    # constraint cost first (each non-nice prize counts like one unit of size
    # non-monotonicity), squared error to break ties
    c = np.asarray(c, dtype=np.float64)
    return (c + NICE_PENALTY * np.asarray(ugly, dtype=np.float64),
            np.broadcast_to(np.asarray(err, dtype=np.float64), c.shape))


def _pick(score):
    i = int(np.lexsort(score[::-1])[0])
    return i, tuple(float(x[i]) for x in score)


def _completion2(sizes, prizes, leftover, spec, tail, last_prize):
    """Best re-spread of the bottom two buckets (or the only one) plus the leftover.

    The last bucket pays ``last_prize``; the one above pays any integer prize
    strictly between it and the prize of the bucket above the pair.
    """
    e, n = last_prize, spec.winners
    k = _kept(sizes, prizes, min(2, len(sizes)), tail)
    money = k["money"] + leftover
    if k["prizes"]:
        p_hi = k["prizes"][-1]
    else:
        # no bucket above the pair: the top may absorb its share of the
        # leftover, but never beyond the requested top prize
        p_hi = min(prizes[0] + -(-leftover // sizes[0]), spec.top_prize) + 1
    placed = k["placed"]

    n_pairs = sum(min(n, (money - 1) // p) for p in range(e + 1, p_hi))
    if n_pairs > MAX_COMPLETIONS:
        raise HeuristicError(f"two-bucket completion would test {n_pairs} candidates")

    best = None
    for p in range(e + 1, p_hi):
        s_max = min(n, (money - 1) // p)
        if s_max < 1:
            continue
        s = np.arange(1, s_max + 1, dtype=np.int64)
        rem = money - s * p
        ok = (rem > 0) & (rem % e == 0)
        if not ok.any():
            continue
        s = s[ok]
        q = rem[ok] // e
        winners = placed + s + q
        c = (100 * np.maximum(0, n - winners) + np.maximum(0, winners - n) + k["violation"]
             + 10 * (np.maximum(0, k["prev_size"] - s) + np.maximum(0, s - q)))
        err = (k["err"] + tail.segment(placed, placed + s, p)
               + tail.segment(placed + s, winners, e) + tail.unpaid(winners))
        i, key = _pick(_score(c, k["ugly"] + (not is_nice(p)) + (not is_nice(e)), err))
        if best is None or key < best[0]:
            best = (key, k["sizes"] + [int(s[i]), int(q[i])], k["prizes"] + [p, e])
    return best


def _completion3(sizes, prizes, leftover, spec, tail, last_prize):
    """Rebuild the bottom three buckets with a nice middle prize.

    The third-from-last bucket keeps its prize but not its size, the middle
    bucket takes a nice prize and the last pays ``last_prize``.  For each
    winner total from N to N + MAX_EXTRA the two linear constraints (money and
    head count) fix the remaining sizes.
    """
    if len(sizes) < 3:
        return None
    e, n = last_prize, spec.winners
    k = _kept(sizes, prizes, 3, tail)
    top = prizes[-3]
    money = k["money"] + leftover
    placed = k["placed"]
    ugly = k["ugly"] + (not is_nice(top)) + (not is_nice(e))
    best = None
    for p in enumerate_nice(e + 1, top - 1):
        for extra in range(MAX_EXTRA + 1):
            w = n - placed + extra
            s2 = np.arange(1, w - 1, dtype=np.int64)
            num = money - s2 * top - (w - s2) * e
            ok = (num > 0) & (num % (p - e) == 0)
            s2 = s2[ok]
            s = num[ok] // (p - e)
            q = w - s2 - s
            ok = (s >= 1) & (q >= 1)
            if not ok.any():
                continue
            s2, s, q = s2[ok], s[ok], q[ok]
            c = (extra + k["violation"] + 10 * (np.maximum(0, k["prev_size"] - s2)
                 + np.maximum(0, s2 - s) + np.maximum(0, s - q)))
            a, b = placed + s2, placed + s2 + s
            err = (k["err"] + tail.segment(placed, a, top) + tail.segment(a, b, p)
                   + tail.segment(b, b + q, e) + tail.unpaid(b + q))
            i, key = _pick(_score(c, ugly, err))
            if best is None or key < best[0]:
                best = (key, k["sizes"] + [int(s2[i]), int(s[i]), int(q[i])],
                        k["prizes"] + [top, p, e])
    return best


def _score_structure(sizes, prizes, spec, curve):
    st = PayoutStructure.from_pairs(zip(sizes, prizes))
    ugly = sum(not is_nice(x) for x in prizes)
    return tuple(float(x) for x in _score(constraint_cost(sizes, spec.winners), ugly, cost(st, curve)))


def _top_up_singletons(sizes, prizes, leftover, spec):
    # (a) raise singleton buckets 2.. toward the midpoint with the prize above
    for i in range(1, min(spec.singleton_buckets, len(sizes))):
        if leftover <= 0:
            break
        size = sizes[i]
        ceiling = min(prizes[i] + leftover / size, (prizes[i - 1] + prizes[i]) / 2)
        raised = max(prizes[i], nice_floor(ceiling))
        leftover -= (raised - prizes[i]) * size
        prizes[i] = raised
    return leftover


def _upgrade_nice(sizes, prizes, leftover, pi):
    """Greedily lift buckets 2.. to their next nice prize, best gain per dollar first."""
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    while True:
        best = None
        for t in range(1, len(sizes)):
            nxt = nice_ceil(prizes[t] + 1)
            price = sizes[t] * (nxt - prizes[t])
            if nxt >= prizes[t - 1] or price > leftover:
                continue
            seg = pi[bounds[t]:bounds[t + 1]]
            gain = float(np.sum((seg - prizes[t]) ** 2) - np.sum((seg - nxt) ** 2))
            if gain > 0 and (best is None or gain / price > best[0]):
                best = (gain / price, t, nxt, price)
        if best is None:
            return leftover
        _, t, nxt, price = best
        prizes[t] = nxt
        leftover -= price


def _finish(sizes, prizes, leftover, spec, curve, tail):
    """Candidate endings for a state whose upper prizes are settled."""
    candidates = []
    saved = (list(sizes), list(prizes), leftover)

    # (b) raise the bottom bucket a dollar per winner at a time, merging on collision
    while leftover >= sizes[-1]:
        inc = leftover // sizes[-1]
        if len(prizes) > 1:
            inc = min(inc, prizes[-2] - prizes[-1])
        else:
            inc = min(inc, spec.top_prize - prizes[-1])
            if inc <= 0:
                break
        prizes[-1] += inc
        leftover -= inc * sizes[-1]
        if len(prizes) > 1 and prizes[-1] == prizes[-2]:
            _merge_last(sizes, prizes)

    # (c) hand whatever is left to extra winners at the bottom prize
    if leftover % prizes[-1] == 0:
        sizes[-1] += leftover // prizes[-1]
        candidates.append((_score_structure(sizes, prizes, spec, curve), sizes, prizes))

    # (d) from the state before (b), rebuild the bottom buckets outright; every
    # nice prize from E up to the current bottom prize is tried for the last one
    sizes, prizes, leftover = saved
    lasts = set(enumerate_nice(max(1, spec.min_payout), prizes[-1]))
    if spec.min_payout >= 1:
        lasts.add(spec.min_payout)
    for last in sorted(lasts):
        for search in (_completion2, _completion3):
            found = search(sizes, prizes, leftover, spec, tail, last)
            if found is not None:
                candidates.append(found)
    return candidates


def stage4_spend_leftover(state: HeuristicState, spec: ContestSpec, curve) -> HeuristicResult:
    """Spend the leftover so the structure pays exactly the prize pool."""
    pi = np.asarray(getattr(curve, "payouts", curve), dtype=np.float64)
    # integral leftover; the sub-dollar residue of the real curve is dropped
    leftover = spec.prize_pool - state.spent
    if leftover < 0:
        raise HeuristicError(f"structure already overspends the pool by {-leftover}")
    if leftover == 0:
        # nothing to spend: the table stands as it is
        structure = state.structure()
        return HeuristicResult(structure, validate(structure, spec),
                               structure.winners - spec.winners, state.beta)
    tail = _TailCost(pi)
    candidates = []
    # two ways to settle the upper prizes before the bottom is rebuilt:
    # the plain singleton top-up, and greedy nice-prize upgrades of any bucket
    for settle in ("top_up", "upgrade"):
        sizes, prizes = list(state.sizes), list(state.prizes)
        if settle == "top_up":
            rest = _top_up_singletons(sizes, prizes, leftover, spec)
        else:
            rest = _upgrade_nice(sizes, prizes, leftover, pi)
        candidates += _finish(sizes, prizes, rest, spec, pi, tail)
    if not candidates:
        raise HeuristicError("no completion spends the leftover exactly")
    _, sizes, prizes = min(candidates, key=lambda c: c[0])

    structure = PayoutStructure.from_pairs(zip(sizes, prizes))
    assert structure.total == spec.prize_pool
    return HeuristicResult(structure, validate(structure, spec),
                           structure.winners - spec.winners, state.beta)


def solve(spec: ContestSpec, curve) -> HeuristicResult:
    """Run all four stages for ``spec`` against the ideal ``curve``."""
    n = len(getattr(curve, "payouts", curve))
    if n != spec.winners:
        raise ValueError(f"curve has {n} places but the contest has {spec.winners} winners")
    sizes, beta = stage1_bucket_sizes(spec)
    state = stage2_init_prizes(sizes, curve, beta, keep_singletons=spec.singleton_buckets,
                               min_prize=max(1, spec.min_payout))
    state = stage3_repair_sizes(state)
    return stage4_spend_leftover(state, spec, curve)
