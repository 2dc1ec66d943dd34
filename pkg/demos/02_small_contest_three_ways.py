"""A 30-winner, $90 contest solved by the heuristic, the exact DP and (if
HiGHS is installed) the exported integer program.

Costs are squared distances to the ideal curve; the square root is printed too
since it reads in dollars.
"""
import math
import os
import tempfile

from payouts import ContestSpec, cost, dp_solve, heuristic_solve, power_law_curve
from payouts import ilp
from payouts.tables import structure_to_text

spec = ContestSpec(prize_pool=90, top_prize=25, min_payout=2, winners=30, max_buckets=7)
curve = power_law_curve(spec)
print("ideal top five:", [round(x, 2) for x in curve.payouts[:5]])


def show(name, structure):
    c = cost(structure, curve)
    print(f"\n{name}: cost {c:.4f}, distance {math.sqrt(c):.4f}")
    print(structure_to_text(structure), end="")


res = heuristic_solve(spec, curve)
show("heuristic", res.structure)
print("violations:", res.report.summary())

show("exact DP", dp_solve(spec, curve))

model = ilp.build(spec, curve)
text = ilp.export_lp(model)
print(f"\ninteger program: {len(model.variables())} binaries, {len(model.rows)} rows")
try:
    import highspy
except ImportError:
    print("highspy not installed; write the model out and solve it elsewhere")
else:
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "yahoo90.lp")
        with open(path, "w") as fh:
            fh.write(text)
        h.readModel(path)
    h.run()
    lp = h.getLp()
    values = {n: round(v) for n, v in zip(lp.col_names_, h.getSolution().col_value)}
    show("integer program (HiGHS)", ilp.import_solution(model, values))
