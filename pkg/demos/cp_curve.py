"""Tabulate c(p) and the lower bound c(p) v on E[mr] against the upper bound via kappa."""
import math

from minrank import mr_expectation_bounds, solve_cp

print("p       c(p)       1-c(p)    sqrt(p)")
for p in (0.01, 0.1, 0.25, 0.5, 0.75, 0.9):
    c = solve_cp(p).c
    print(f"{p:<7} {c:.7f}  {1 - c:.6f}  {math.sqrt(p):.6f}")

print()
for v in (100, 1000, 10_000):
    lo, hi = mr_expectation_bounds(v, 0.5)
    print(f"v={v:<6} {lo.value:10.1f} <= E[mr] <= {hi.value:10.1f}")
