"""The 1000-place poker main event: $60,348,000 across 30 buckets, with the top
nine places each getting their own prize.
"""
import time

from payouts import ContestSpec, heuristic_solve, power_law_curve
from payouts.tables import structure_to_text

spec = ContestSpec(prize_pool=60_348_000, top_prize=8_000_000, min_payout=15_000,
                   winners=1000, max_buckets=30, singleton_buckets=9)

t0 = time.perf_counter()
res = heuristic_solve(spec, power_law_curve(spec))
elapsed = time.perf_counter() - t0

print(structure_to_text(res.structure))
print(f"solved in {elapsed:.2f} s; beta = {res.beta:.4f}")
print("violations:", res.report.summary())
# the pool is not a multiple of a nice bottom prize, so at most one bucket absorbs the residue
for v in res.report.items:
    b = res.structure.buckets[v.bucket]
    print(f"  {v.kind}: bucket {v.bucket + 1} pays ${b.prize:,} to {b.size} places")
