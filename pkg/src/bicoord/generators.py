"""Deterministic benchmark instance families.

All three families share the feasible set
    sum_i x_i = beta, 0 <= x_i <= 1 + beta/n + 0.5 sin(i), i = 1..n
(indices 1-based inside the trig formulas, radians). The quadratic term uses
    p_ij = sin(i) cos(j) for i < j, mirrored for i > j,
    p_jj = sum_{i != j} |p_ij| + 1,
which is strictly diagonally dominant, hence positive definite. The log term
is -ln(<c, x> + 5) with c_i = 2 + sin(i); c > 0 and x >= 0 keep the argument
positive. The nonsmooth family adds ||x||_1 smoothed coordinatewise by
sqrt(x_i^2 + tau^2). Every feasible point starts at x = (beta/n) e, which is
interior for these bounds.
"""

from __future__ import annotations

import numpy as np

from .objectives import QuadraticLogObjective, QuadraticObjective, SmoothedL1Objective
from .problem import BoxBounds, LinearEquality, ProblemInstance, build_problem

__all__ = ["gen_quadratic", "gen_convex_log", "gen_nonsmooth_l1",
           "protocol_start", "interaction_matrix"]


def interaction_matrix(n: int) -> np.ndarray:
    """Symmetric positive definite sin/cos coupling matrix."""
    idx = np.arange(1, n + 1, dtype=float)
    s, c = np.sin(idx), np.cos(idx)
    i_grid = idx[:, None]
    j_grid = idx[None, :]
    P = np.where(i_grid < j_grid, s[:, None] * c[None, :], s[None, :] * c[:, None])
    np.fill_diagonal(P, 0.0)
    np.fill_diagonal(P, np.abs(P).sum(axis=0) + 1.0)
    return P


def _feasible_set(n: int, beta: float) -> tuple[BoxBounds, LinearEquality]:
    if n < 2:
        raise ValueError("need n >= 2")
    if not beta > 0.0:
        raise ValueError("beta must be positive")
    idx = np.arange(1, n + 1, dtype=float)
    upper = 1.0 + beta / n + 0.5 * np.sin(idx)
    return (BoxBounds(np.zeros(n), upper), LinearEquality(np.ones(n), beta))


def _log_cost(n: int) -> np.ndarray:
    return 2.0 + np.sin(np.arange(1, n + 1, dtype=float))


def gen_quadratic(n: int, beta: float) -> ProblemInstance:
    """Family 1: f(x) = 0.5 <P x, x>."""
    bounds, eq = _feasible_set(n, beta)
    obj = QuadraticObjective(interaction_matrix(n))
    obj.spec = {"kind": "quadratic", "params": {"matrix": obj.P.tolist()}}
    return build_problem(bounds, eq, obj)


def gen_convex_log(n: int, beta: float) -> ProblemInstance:
    """Family 2: f(x) = 0.5 <P x, x> - ln(<c, x> + 5)."""
    bounds, eq = _feasible_set(n, beta)
    obj = QuadraticLogObjective(interaction_matrix(n), _log_cost(n), 5.0)
    obj.spec = {"kind": "quadratic_log",
                "params": {"matrix": obj.P.tolist(), "c": obj.c.tolist(),
                           "xi": obj.xi}}
    return build_problem(bounds, eq, obj)


def gen_nonsmooth_l1(n: int, beta: float, tau: float = 1.6) -> ProblemInstance:
    """Family 3: family 2 plus ||x||_1, smoothed at level tau."""
    bounds, eq = _feasible_set(n, beta)
    obj = SmoothedL1Objective(interaction_matrix(n), _log_cost(n), 5.0, tau)
    obj.spec = {"kind": "quadratic_log_l1",
                "params": {"matrix": obj.P.tolist(), "c": obj.c.tolist(),
                           "xi": obj.xi, "tau": obj.smoothing}}
    return build_problem(bounds, eq, obj)


def protocol_start(p: ProblemInstance) -> np.ndarray:
    """Benchmark start point (beta/n) e."""
    return np.full(p.n, p.equality.beta / p.n)
