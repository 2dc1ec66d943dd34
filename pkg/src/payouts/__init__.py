"""Prize payout tables for large contests.

An ideal power-law curve is fitted to the contest parameters and then
discretised into a small number of equal-prize buckets with "nice" prizes that
sum exactly to the prize pool.  Three solvers share one data model: a fast
heuristic, an exact dynamic program for small contests, and an integer-program
export for external MILP solvers.
"""
from .core import (Bucket, ContestSpec, PayoutStructure, Violation, ViolationReport,
                   constraint_cost, cost, expand, rebucket, validate)
from .curve import (IdealCurve, InfeasibleCurveError, exponential_curve, power_law_curve,
                    solve_alpha, solve_ratio)
from .dp import dp_solve
from .heuristic import HeuristicError, HeuristicResult
from .heuristic import solve as heuristic_solve
from .nice import enumerate_nice, is_nice, nice_ceil, nice_floor
from .oracle import enumerate_all

__version__ = "0.1.0"

__all__ = [
    "Bucket", "ContestSpec", "PayoutStructure", "Violation", "ViolationReport",
    "constraint_cost", "cost", "expand", "rebucket", "validate",
    "IdealCurve", "InfeasibleCurveError", "exponential_curve", "power_law_curve",
    "solve_alpha", "solve_ratio",
    "dp_solve", "HeuristicError", "HeuristicResult", "heuristic_solve",
    "enumerate_nice", "is_nice", "nice_ceil", "nice_floor", "enumerate_all",
]
