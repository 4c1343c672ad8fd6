"""Feasible-set geometry on a toy instance.

Projects a few points onto {sum x = beta, lo <= x <= hi} and minimizes a
linear cost over the same set with the greedy ratio rule, cross-checking
the value against explicit vertex enumeration for this tiny case.
"""

import itertools

import numpy as np

from bicoord import (BoxBounds, LinearEquality, LinearObjective, build_problem,
                     check_feasibility, minimize_linear, project)

p = build_problem(
    BoxBounds(np.zeros(4), np.array([1.0, 1.5, 0.5, 2.0])),
    LinearEquality(np.array([1.0, 2.0, 1.0, 0.5]), 2.5),
    LinearObjective(np.zeros(4)),
)

rng = np.random.default_rng(0)
print("projection onto sum with weights", p.equality.a, "= 2.5")
for _ in range(3):
    z = rng.uniform(-1.0, 3.0, size=4)
    x = project(z, p)
    feas = check_feasibility(x, p)
    print(f"  z = {np.round(z, 3)} -> x = {np.round(x, 4)}"
          f"  (balance residual {feas.balance_residual:.1e})")

c = np.array([1.0, -2.0, 0.5, 0.3])
y, val = minimize_linear(c, p)
print("\nlinear cost", c)
print("greedy minimizer", np.round(y, 4), "value", round(val, 6))

# brute force over vertex patterns: at most one coordinate off its bounds
best = np.inf
for free in range(4):
    others = [k for k in range(4) if k != free]
    for bits in itertools.product((0, 1), repeat=3):
        x = np.empty(4)
        for k, bit in zip(others, bits):
            x[k] = p.bounds.upper[k] if bit else p.bounds.lower[k]
        x[free] = (2.5 - p.equality.a[others] @ x[others]) / p.equality.a[free]
        if p.bounds.lower[free] <= x[free] <= p.bounds.upper[free]:
            best = min(best, float(c @ x))
print("enumerated value ", round(best, 6))
