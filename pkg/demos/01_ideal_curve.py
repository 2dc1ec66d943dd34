"""From contest parameters to an ideal per-place payout curve.

A 10,000-winner contest with a $1M pool and a $150k top prize.  The power-law
curve spreads money deep into the field; the exponential one piles it onto the
first few dozen places.
"""
import numpy as np

from payouts import ContestSpec, exponential_curve, power_law_curve

spec = ContestSpec(prize_pool=1_000_000, top_prize=150_000, min_payout=25,
                   winners=10_000, max_buckets=30)

power = power_law_curve(spec)
expo = exponential_curve(spec)
print(f"power law: alpha = {power.alpha:.4f}, pays out {power.total:,.2f}")
print(f"exponential: ratio = {expo.alpha:.4f}, pays out {expo.total:,.2f}")

ranks = np.array([1, 2, 3, 10, 100, 1000, 10_000])
print("\n rank    power law   exponential")
for r in ranks:
    print(f"{r:5d}  {power.payouts[r - 1]:11.2f}  {expo.payouts[r - 1]:12.2f}")

# on log-log axes the power-law curve (minus the floor E) is a straight line
i = np.arange(1, spec.winners + 1)
slope = np.polyfit(np.log(i), np.log(power.payouts - spec.min_payout), 1)[0]
print(f"\nlog-log slope {slope:.4f}  (= -alpha)")

near_floor = int(np.argmax(expo.payouts - spec.min_payout <= 1)) + 1
print(f"exponential curve is within $1 of the minimum from rank {near_floor}")
