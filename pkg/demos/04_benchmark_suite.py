"""Run the heuristic over the 25 bundled real-world contests and print the
bench table next to the reference costs that shipped with each contest."""
import math

from payouts.app import bench_to_text, run_bench
from payouts.tables import bundled_suite

suite = bundled_suite()
rows = run_bench(suite)
print(bench_to_text(rows))

print(f"{'contest':26s} {'distance':>12s} {'reference':>12s}  ratio")
for item, row in zip(suite, rows):
    ref = item["reference"]["heur_cost"]
    d = math.sqrt(row.cost)
    print(f"{item['label']:26s} {d:12.2f} {ref:12.2f}  {d / ref:5.2f}")
