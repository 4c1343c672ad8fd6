"""Geometry of the feasible set: projection, linear minimization, feasibility.

The feasible set is D = {x in [lower, upper] : <a, x> = beta}. Both kernels
run on the scalar multiplier of the constraint normal: the map
lam -> <a, clip(z + lam * a)> is piecewise linear and nondecreasing, so the
projection reduces to a breakpoint search, and minimizing a linear function
over D is a continuous knapsack solved greedily by cost ratio.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .problem import ProblemInstance

__all__ = ["project", "minimize_linear", "check_feasibility", "FeasibilityReport"]


def _balance(lam: float, z, a, lower, upper) -> float:
    return float(a @ np.clip(z + lam * a, lower, upper))


def _bisect_lambda(z, a, lower, upper, beta, lo: float, hi: float) -> float:
    # plain bisection on the monotone balance map, fallback path
    for _ in range(200):
        if hi - lo <= 1e-12 * max(1.0, abs(lo), abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        if _balance(mid, z, a, lower, upper) < beta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def project(z, p: ProblemInstance) -> np.ndarray:
    """Euclidean projection of z onto the feasible set of p.

    The projection is clip(z + lam* a) where lam* solves
    <a, clip(z + lam a)> = beta. Breakpoints of the map are the lam values
    where a coordinate enters or leaves its bound; the solving segment is
    located by bisection on the sorted breakpoints and lam* recovered by
    linear interpolation, exact because the map is affine between breakpoints.
    """
    a = p.equality.a
    lower, upper = p.bounds.lower, p.bounds.upper
    beta = p.equality.beta
    z = np.asarray(z, dtype=float)
    if z.shape != a.shape:
        raise ValueError("point has wrong length")

    t1 = (lower - z) / a
    t2 = (upper - z) / a
    bps = np.unique(np.concatenate([t1, t2]))

    g_lo = _balance(bps[0], z, a, lower, upper)
    g_hi = _balance(bps[-1], z, a, lower, upper)
    if beta <= g_lo:
        lam = float(bps[0])
    elif beta >= g_hi:
        lam = float(bps[-1])
    else:
        # invariant: balance(bps[left]) <= beta <= balance(bps[right])
        left, right = 0, len(bps) - 1
        while right - left > 1:
            mid = (left + right) // 2
            if _balance(bps[mid], z, a, lower, upper) < beta:
                left = mid
            else:
                right = mid
        bl, br = float(bps[left]), float(bps[right])
        gl = _balance(bl, z, a, lower, upper)
        gr = _balance(br, z, a, lower, upper)
        if gr > gl:
            lam = bl + (beta - gl) * (br - bl) / (gr - gl)
        else:
            lam = bl

    x = np.clip(z + lam * a, lower, upper)
    residual = beta - float(a @ x)
    if abs(residual) > 1e-11 * max(1.0, abs(beta)):
        # interpolation degenerated, fall back to bisection on lam
        lam = _bisect_lambda(z, a, lower, upper, beta,
                             float(bps[0]) - 1.0, float(bps[-1]) + 1.0)
        x = np.clip(z + lam * a, lower, upper)
        residual = beta - float(a @ x)

    # spread any remaining float residue over the strictly free coordinates
    free = (x > lower) & (x < upper)
    denom = float((a[free] ** 2).sum())
    if denom > 0.0 and residual != 0.0:
        x[free] += (residual / denom) * a[free]
        np.clip(x, lower, upper, out=x)
    return x


def minimize_linear(c, p: ProblemInstance) -> tuple[np.ndarray, float]:
    """Minimize <c, x> over the feasible set of p. Returns (argmin, value).

    Continuous knapsack: after flipping coordinates with a_i < 0, start every
    coordinate at its lower bound and spend the balance budget
    beta - <a, lower> raising coordinates in increasing order of c_i / a_i,
    ties broken by lowest index. At most one coordinate ends fractional.
    """
    a = p.equality.a
    c = np.asarray(c, dtype=float)
    if c.shape != a.shape:
        raise ValueError("cost vector has wrong length")

    signs = np.sign(a)
    aa = a * signs
    lo = np.where(signs > 0, p.bounds.lower, -p.bounds.upper)
    hi = np.where(signs > 0, p.bounds.upper, -p.bounds.lower)
    cc = c * signs

    order = np.lexsort((np.arange(a.shape[0]), cc / aa))
    y = lo.copy()
    budget = p.equality.beta - float(aa @ lo)
    for idx in order:
        if budget <= 0.0:
            break
        cap = aa[idx] * (hi[idx] - lo[idx])
        if budget >= cap:
            y[idx] = hi[idx]
            budget -= cap
        else:
            y[idx] = lo[idx] + budget / aa[idx]
            budget = 0.0
    y *= signs
    return y, float(c @ y)


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    balance_residual: float
    max_box_violation: float


def check_feasibility(x, p: ProblemInstance, tol: float = 1e-10,
                      box_tol: float = 0.0) -> FeasibilityReport:
    """Report balance residual and box violation of x.

    feasible means |<a, x> - beta| <= tol * max(1, |beta|) and the box is
    respected up to box_tol (default exact containment). Violations are
    reported, never repaired.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != p.equality.a.shape:
        raise ValueError("point has wrong length")
    residual = p.equality.residual(x)
    below = float(np.max(p.bounds.lower - x, initial=-np.inf))
    above = float(np.max(x - p.bounds.upper, initial=-np.inf))
    violation = max(0.0, below, above)
    feasible = (abs(residual) <= tol * max(1.0, abs(p.equality.beta))
                and violation <= box_tol)
    return FeasibilityReport(feasible=feasible, balance_residual=residual,
                             max_box_violation=violation)
