import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from bicoord import (
    BoxBounds,
    LinearEquality,
    LinearObjective,
    build_problem,
    check_feasibility,
    minimize_linear,
    project,
)


def make_instance(a, lower, upper, beta):
    return build_problem(
        BoxBounds(np.asarray(lower, float), np.asarray(upper, float)),
        LinearEquality(np.asarray(a, float), float(beta)),
        LinearObjective(np.zeros(len(a))),
    )


def random_instance(rng, n=None, signed=False):
    n = n or int(rng.integers(2, 7))
    mag = rng.uniform(0.3, 3.0, size=n)
    a = mag * rng.choice([-1.0, 1.0], size=n) if signed else mag
    lower = rng.uniform(-2.0, 0.0, size=n)
    upper = lower + rng.uniform(0.5, 3.0, size=n)
    lo_sum = float(np.sum(np.minimum(a * lower, a * upper)))
    hi_sum = float(np.sum(np.maximum(a * lower, a * upper)))
    slack = 1e-3 * (hi_sum - lo_sum)
    beta = rng.uniform(lo_sum + slack, hi_sum - slack)
    return make_instance(a, lower, upper, beta)


def project_bisect(z, p, iters=200):
    # reference oracle: bisection on the multiplier of the balance equation
    a = p.equality.a
    lo, hi = p.bounds.lower, p.bounds.upper

    def balance(lam):
        return float(a @ np.clip(z + lam * a, lo, hi))

    lam_lo, lam_hi = -1.0, 1.0
    while balance(lam_lo) > p.equality.beta:
        lam_lo *= 2.0
    while balance(lam_hi) < p.equality.beta:
        lam_hi *= 2.0
    for _ in range(iters):
        mid = 0.5 * (lam_lo + lam_hi)
        if balance(mid) < p.equality.beta:
            lam_lo = mid
        else:
            lam_hi = mid
    return np.clip(z + 0.5 * (lam_lo + lam_hi) * a, lo, hi)


def enumerate_linear(c, p):
    # every vertex of box-cap-hyperplane has at most one coordinate off
    # its bounds; scan all patterns and keep the best feasible value
    a = p.equality.a
    lo, hi = p.bounds.lower, p.bounds.upper
    n = p.n
    best = np.inf
    for free in range(n):
        others = [k for k in range(n) if k != free]
        for bits in itertools.product((0, 1), repeat=n - 1):
            x = np.empty(n)
            for k, bit in zip(others, bits):
                x[k] = hi[k] if bit else lo[k]
            x[free] = (p.equality.beta - a[others] @ x[others]) / a[free]
            if lo[free] - 1e-9 <= x[free] <= hi[free] + 1e-9:
                x[free] = min(max(x[free], lo[free]), hi[free])
                best = min(best, float(c @ x))
    return best


def test_project_fixed_point_for_feasible_input():
    p = make_instance([1.0, 1.0], [0.0, 0.0], [1.0, 1.0], 1.0)
    z = np.array([0.25, 0.75])
    assert_allclose(project(z, p), z, atol=1e-12)


def test_project_symmetric_midpoint():
    p = make_instance([1.0, 1.0], [0.0, 0.0], [1.0, 1.0], 1.0)
    assert_allclose(project(np.array([1.0, 1.0]), p), [0.5, 0.5], atol=1e-12)


def test_project_clamps_to_vertex():
    p = make_instance([1.0] * 3, [0.0] * 3, [1.0] * 3, 1.0)
    assert_allclose(project(np.array([2.0, 0.0, 0.0]), p), [1.0, 0.0, 0.0],
                    atol=1e-12)


@pytest.mark.parametrize("signed", [False, True])
def test_project_matches_bisection_oracle(signed):
    rng = np.random.default_rng(17 if signed else 19)
    for _ in range(60):
        p = random_instance(rng, signed=signed)
        z = rng.uniform(p.bounds.lower - 2.0, p.bounds.upper + 2.0)
        x = project(z, p)
        ref = project_bisect(z, p)
        assert_allclose(x, ref, atol=1e-8)
        rep = check_feasibility(x, p)
        assert rep.feasible


def test_project_idempotent():
    rng = np.random.default_rng(23)
    for _ in range(40):
        p = random_instance(rng)
        z = rng.uniform(p.bounds.lower - 1.0, p.bounds.upper + 1.0)
        x = project(z, p)
        assert_allclose(project(x, p), x, atol=1e-10)


def test_project_is_best_approximation():
    rng = np.random.default_rng(29)
    for _ in range(15):
        p = random_instance(rng)
        z = rng.uniform(p.bounds.lower - 1.5, p.bounds.upper + 1.5)
        x = project(z, p)
        d_star = np.linalg.norm(x - z)
        for _ in range(200):
            y = project(rng.uniform(p.bounds.lower, p.bounds.upper), p)
            assert d_star <= np.linalg.norm(y - z) + 1e-10


def test_balance_map_monotone_in_multiplier():
    rng = np.random.default_rng(31)
    for _ in range(20):
        p = random_instance(rng, signed=True)
        z = rng.uniform(p.bounds.lower - 1.0, p.bounds.upper + 1.0)
        a = p.equality.a
        lams = np.sort(rng.uniform(-5, 5, size=60))
        vals = [a @ np.clip(z + lam * a, p.bounds.lower, p.bounds.upper)
                for lam in lams]
        assert np.all(np.diff(vals) >= -1e-12)


def test_minimize_linear_constant_ratio():
    p = make_instance([1.0, 1.0], [0.0, 0.0], [1.0, 1.0], 1.0)
    point, value = minimize_linear(p.equality.a, p)
    assert_allclose(value, 1.0, atol=1e-12)
    # ties broken toward the lowest index
    assert_allclose(point, [1.0, 0.0], atol=1e-12)


def test_minimize_linear_prefers_cheap_ratio():
    p = make_instance([1.0, 1.0], [0.0, 0.0], [1.0, 1.0], 1.0)
    point, value = minimize_linear(np.array([1.0, 2.0]), p)
    assert_allclose(point, [1.0, 0.0], atol=1e-12)
    assert_allclose(value, 1.0, atol=1e-12)


@pytest.mark.parametrize("signed", [False, True])
def test_minimize_linear_matches_vertex_enumeration(signed):
    rng = np.random.default_rng(37 if signed else 41)
    for _ in range(60):
        p = random_instance(rng, signed=signed)
        c = rng.standard_normal(p.n)
        point, value = minimize_linear(c, p)
        assert check_feasibility(point, p).feasible
        ref = enumerate_linear(c, p)
        assert abs(value - ref) <= 1e-10 * max(1.0, abs(ref))
        assert_allclose(c @ point, value, atol=1e-12)


def test_minimize_linear_lower_bounds_sampled_points():
    rng = np.random.default_rng(43)
    p = random_instance(rng, n=5)
    c = rng.standard_normal(5)
    _, value = minimize_linear(c, p)
    for _ in range(500):
        y = project(rng.uniform(p.bounds.lower, p.bounds.upper), p)
        assert value <= c @ y + 1e-10


def test_feasibility_report_of_projection():
    rng = np.random.default_rng(47)
    p = random_instance(rng)
    x = project(rng.standard_normal(p.n), p)
    rep = check_feasibility(x, p, tol=1e-8)
    assert rep.feasible
    assert abs(rep.balance_residual) <= 1e-8 * max(1.0, abs(p.equality.beta))


def test_feasibility_detects_short_balance():
    p = make_instance([1.0, 1.0], [0.0, 0.0], [1.0, 1.0], 1.0)
    rep = check_feasibility(p.bounds.lower, p)
    assert not rep.feasible
    assert rep.balance_residual < 0.0


def test_feasibility_reports_box_violation():
    p = make_instance([1.0, 1.0], [0.0, 0.0], [1.0, 1.0], 1.0)
    rep = check_feasibility(np.array([1.1, -0.1]), p)
    assert not rep.feasible
    assert_allclose(rep.max_box_violation, 0.1, atol=1e-12)
