"""Objective oracles.

An objective exposes value(x), gradient(x) and single-coordinate partial(i, x).
Objectives that approximate a nonsmooth term carry the current smoothing
parameter in `smoothing` and can be rebuilt at a new parameter through
`with_smoothing`, which is how stage schedules tighten the approximation.

Instances are immutable; the same object can be shared across stages.
"""

from __future__ import annotations

import numpy as np

from .smoothing import smooth_abs_sqrt, smooth_plus

__all__ = [
    "Objective",
    "LinearObjective",
    "QuadraticObjective",
    "QuadraticLogObjective",
    "SmoothedL1Objective",
    "SvmDualObjective",
    "PortfolioObjective",
    "SeparableQuadraticObjective",
    "SignFlipObjective",
    "CountingObjective",
]


class Objective:
    """Base oracle. Subclasses override value and gradient at least."""

    #: current smoothing parameter, None for objectives that need none
    smoothing: float | None = None
    #: serialization payload {"kind": ..., "params": ...}, set by builders
    spec: dict | None = None

    def value(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def gradient(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def partial(self, i: int, x: np.ndarray) -> float:
        # generic fallback; subclasses with cheap partials override
        return float(self.gradient(x)[i])

    def with_smoothing(self, eps: float) -> "Objective":
        if self.smoothing is None:
            raise ValueError("objective has no smoothing parameter")
        raise NotImplementedError


class LinearObjective(Objective):
    """f(x) = <c, x>."""

    def __init__(self, c):
        self.c = np.asarray(c, dtype=float)

    def value(self, x):
        return float(self.c @ x)

    def gradient(self, x):
        return self.c.copy()

    def partial(self, i, x):
        return float(self.c[i])


class QuadraticObjective(Objective):
    """f(x) = 0.5 <P x, x> with symmetric P. partial costs one row product."""

    def __init__(self, P):
        P = np.asarray(P, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ValueError("P must be a square matrix")
        if not np.allclose(P, P.T, atol=1e-12 * max(1.0, float(np.abs(P).max()))):
            raise ValueError("P must be symmetric")
        self.P = P

    def value(self, x):
        return 0.5 * float(x @ (self.P @ x))

    def gradient(self, x):
        return self.P @ x

    def partial(self, i, x):
        return float(self.P[i] @ x)


class QuadraticLogObjective(QuadraticObjective):
    """f(x) = 0.5 <P x, x> - ln(<c, x> + xi).

    Needs <c, x> + xi > 0 on the box; callers keep c >= 0, xi > 0, x >= 0.
    """

    def __init__(self, P, c, xi: float):
        super().__init__(P)
        self.c = np.asarray(c, dtype=float)
        if self.c.shape != (self.P.shape[0],):
            raise ValueError("c has wrong length")
        self.xi = float(xi)

    def _den(self, x) -> float:
        den = float(self.c @ x) + self.xi
        if den <= 0.0:
            raise ValueError("log argument not positive at this point")
        return den

    def value(self, x):
        return 0.5 * float(x @ (self.P @ x)) - np.log(self._den(x))

    def gradient(self, x):
        return self.P @ x - self.c / self._den(x)

    def partial(self, i, x):
        return float(self.P[i] @ x) - self.c[i] / self._den(x)


class SmoothedL1Objective(QuadraticLogObjective):
    """Quadratic-log cost plus sum_i sqrt(x_i^2 + tau^2).

    Smooth stand-in for cost + ||x||_1 at approximation level tau; the gap to
    the nonsmooth value is at most n * tau.
    """

    def __init__(self, P, c, xi: float, tau: float):
        super().__init__(P, c, xi)
        if not tau > 0.0:
            raise ValueError("tau must be positive")
        self.smoothing = float(tau)

    def value(self, x):
        smooth, _ = smooth_abs_sqrt(x, self.smoothing**2)
        return super().value(x) + float(np.sum(smooth))

    def gradient(self, x):
        _, der = smooth_abs_sqrt(x, self.smoothing**2)
        return super().gradient(x) + der

    def partial(self, i, x):
        xi_ = float(x[i])
        return super().partial(i, x) + xi_ / np.hypot(xi_, self.smoothing)

    def with_smoothing(self, eps):
        return SmoothedL1Objective(self.P, self.c, self.xi, eps)


class SvmDualObjective(Objective):
    """Penalized dual of a linear separating-surface problem.

    A[i, j] = label_i * feature_ij. With s = A^T y,
        f(y) = (tau / p) * sum_j [ plus(s_j - 1)^p + plus(-s_j - 1)^p ] - sum_i y_i
    where plus is exact max(., 0) for p = 2 and the sqrt surrogate for p = 1.
    """

    def __init__(self, A, tau: float, p: int, smooth_eps: float | None = None):
        self.A = np.asarray(A, dtype=float)
        if self.A.ndim != 2:
            raise ValueError("A must be a matrix")
        if not tau > 0.0:
            raise ValueError("tau must be positive")
        if p not in (1, 2):
            raise ValueError("p must be 1 or 2")
        self.tau = float(tau)
        self.p = int(p)
        if p == 1:
            if smooth_eps is None or not smooth_eps > 0.0:
                raise ValueError("p = 1 needs a positive smooth_eps")
            self.smoothing = float(smooth_eps)

    def _margins(self, y):
        s = self.A.T @ y
        return s - 1.0, -s - 1.0

    def value(self, y):
        up, dn = self._margins(y)
        if self.p == 2:
            pen = np.maximum(up, 0.0) ** 2 + np.maximum(dn, 0.0) ** 2
        else:
            pen = smooth_plus(up, self.smoothing)[0] + smooth_plus(dn, self.smoothing)[0]
        return (self.tau / self.p) * float(np.sum(pen)) - float(np.sum(y))

    def gradient(self, y):
        up, dn = self._margins(y)
        if self.p == 2:
            u = np.maximum(up, 0.0) - np.maximum(dn, 0.0)
        else:
            u = smooth_plus(up, self.smoothing)[1] - smooth_plus(dn, self.smoothing)[1]
        return self.tau * (self.A @ u) - 1.0

    def with_smoothing(self, eps):
        if self.p != 1:
            raise ValueError("objective has no smoothing parameter")
        return SvmDualObjective(self.A, self.tau, self.p, smooth_eps=eps)


class PortfolioObjective(Objective):
    """f(x) = <C x, x> + (tau / p) * plus(w - <m, x>)^p.

    Risk term keeps the full quadratic form (no 1/2). plus is exact for p = 2
    and the sqrt surrogate for p = 1.
    """

    def __init__(self, C, means, target: float, tau: float, p: int,
                 smooth_eps: float | None = None):
        self.C = np.asarray(C, dtype=float)
        self.means = np.asarray(means, dtype=float)
        self.target = float(target)
        if not tau > 0.0:
            raise ValueError("tau must be positive")
        if p not in (1, 2):
            raise ValueError("p must be 1 or 2")
        self.tau = float(tau)
        self.p = int(p)
        if p == 1:
            if smooth_eps is None or not smooth_eps > 0.0:
                raise ValueError("p = 1 needs a positive smooth_eps")
            self.smoothing = float(smooth_eps)

    def _shortfall(self, x) -> float:
        return self.target - float(self.means @ x)

    def value(self, x):
        t = self._shortfall(x)
        if self.p == 2:
            pen = max(t, 0.0) ** 2
        else:
            pen = smooth_plus(t, self.smoothing)[0]
        return float(x @ (self.C @ x)) + (self.tau / self.p) * pen

    def gradient(self, x):
        t = self._shortfall(x)
        if self.p == 2:
            slope = max(t, 0.0)
        else:
            slope = smooth_plus(t, self.smoothing)[1]
        return 2.0 * (self.C @ x) - self.tau * slope * self.means

    def with_smoothing(self, eps):
        if self.p != 1:
            raise ValueError("objective has no smoothing parameter")
        return PortfolioObjective(self.C, self.means, self.target, self.tau,
                                  self.p, smooth_eps=eps)


class SeparableQuadraticObjective(Objective):
    """f(x) = <lin, x> + 0.5 * sum_i quad_i x_i^2. partial costs O(1)."""

    def __init__(self, lin, quad):
        self.lin = np.asarray(lin, dtype=float)
        self.quad = np.asarray(quad, dtype=float)
        if self.lin.shape != self.quad.shape:
            raise ValueError("lin and quad must have the same length")

    def value(self, x):
        return float(self.lin @ x + 0.5 * (self.quad * x) @ x)

    def gradient(self, x):
        return self.lin + self.quad * x

    def partial(self, i, x):
        return float(self.lin[i] + self.quad[i] * x[i])


class SignFlipObjective(Objective):
    """f_tilde(y) = f(signs * y) for a +-1 vector of signs."""

    def __init__(self, inner: Objective, signs):
        self.inner = inner
        self.signs = np.asarray(signs, dtype=float)
        if not np.all(np.abs(self.signs) == 1.0):
            raise ValueError("signs must be +-1")

    @property
    def smoothing(self):
        return self.inner.smoothing

    def value(self, y):
        return self.inner.value(self.signs * y)

    def gradient(self, y):
        return self.signs * self.inner.gradient(self.signs * y)

    def partial(self, i, y):
        return float(self.signs[i]) * self.inner.partial(i, self.signs * y)

    def with_smoothing(self, eps):
        return SignFlipObjective(self.inner.with_smoothing(eps), self.signs)


class CountingObjective(Objective):
    """Wrapper that counts oracle calls; used to compare selection strategies."""

    def __init__(self, inner: Objective):
        self.inner = inner
        self.value_calls = 0
        self.gradient_calls = 0
        self.partial_calls = 0

    @property
    def smoothing(self):
        return self.inner.smoothing

    def value(self, x):
        self.value_calls += 1
        return self.inner.value(x)

    def gradient(self, x):
        self.gradient_calls += 1
        return self.inner.gradient(x)

    def partial(self, i, x):
        self.partial_calls += 1
        return self.inner.partial(i, x)

    def with_smoothing(self, eps):
        return CountingObjective(self.inner.with_smoothing(eps))
