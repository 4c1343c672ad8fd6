"""Published reference results for the benchmark families.

Iteration counts to reach accuracy 0.1 from the start point (beta/n) e with
sigma = theta = nu = 0.5 and an iteration cap of 500. Cells where a method
did not reach the accuracy within the cap record the final error bound
instead (and the final smoothing parameter for the nonsmooth family);
exceeds_one marks cells reported only as "error bound still above 1".
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["ReferenceCell", "REFERENCE", "reference_cell"]


@dataclass(frozen=True)
class ReferenceCell:
    iterations: int | None = None
    delta: float | None = None   # error bound at the cap when unconverged
    tau: float | None = None     # final smoothing parameter (family 3)
    exceeds_one: bool = False

    @property
    def converged(self) -> bool:
        return self.iterations is not None


def _it(k: int) -> ReferenceCell:
    return ReferenceCell(iterations=k)


def _d(v: float, tau: float | None = None) -> ReferenceCell:
    return ReferenceCell(delta=v, tau=tau)


_BIG = ReferenceCell(exceeds_one=True)

# family 1: quadratic
_T1 = {
    (5, 10): {"cgm": _it(66), "bcv": _it(30), "mbc": _d(1.28)},
    (5, 20): {"cgm": _it(22), "bcv": _it(41), "mbc": _d(0.99)},
    (5, 50): {"cgm": _it(82), "bcv": _it(96), "mbc": _d(0.91)},
    (5, 100): {"cgm": _d(0.1), "bcv": _it(213), "mbc": _d(1.63)},
    (10, 10): {"cgm": _it(55), "bcv": _it(40), "mbc": _d(5.13)},
    (10, 20): {"cgm": _it(103), "bcv": _it(54), "mbc": _BIG},
    (10, 50): {"cgm": _it(90), "bcv": _it(145), "mbc": _BIG},
    (10, 100): {"cgm": _d(0.48), "bcv": _it(299), "mbc": _BIG},
    (20, 10): {"cgm": _d(0.14), "bcv": _it(62), "mbc": _BIG},
    (20, 20): {"cgm": _d(0.23), "bcv": _it(80), "mbc": _BIG},
    (20, 50): {"cgm": _d(0.21), "bcv": _it(191), "mbc": _BIG},
    (20, 100): {"cgm": _d(1.07), "bcv": _it(405), "mbc": _BIG},
}

# family 2: quadratic plus log barrier term
_T2 = {
    (5, 10): {"cgm": _it(77), "bcv": _it(29), "mbc": _d(1.29)},
    (5, 20): {"cgm": _it(30), "bcv": _it(35), "mbc": _BIG},
    (5, 50): {"cgm": _it(111), "bcv": _it(109), "mbc": _BIG},
    (5, 100): {"cgm": _it(457), "bcv": _it(240), "mbc": _BIG},
    (10, 10): {"cgm": _it(62), "bcv": _it(44), "mbc": _d(5.14)},
    (10, 20): {"cgm": _it(77), "bcv": _it(53), "mbc": _BIG},
    (10, 50): {"cgm": _it(115), "bcv": _it(167), "mbc": _BIG},
    (10, 100): {"cgm": _d(0.46), "bcv": _it(282), "mbc": _BIG},
    (20, 10): {"cgm": _d(0.12), "bcv": _it(68), "mbc": _BIG},
    (20, 20): {"cgm": _d(0.21), "bcv": _it(75), "mbc": _BIG},
    (20, 50): {"cgm": _d(0.24), "bcv": _it(220), "mbc": _BIG},
    (20, 100): {"cgm": _d(1.07), "bcv": _it(350), "mbc": _BIG},
}

# family 3: smoothed l1 term added, bi-coordinate methods vs cgm only
_T3 = {
    (5, 10): {"cgm": _it(154), "bcv": _it(57)},
    (5, 20): {"cgm": _it(43), "bcv": _it(52)},
    (5, 50): {"cgm": _it(103), "bcv": _it(85)},
    (5, 100): {"cgm": _it(300), "bcv": _it(234)},
    (10, 10): {"cgm": _it(98), "bcv": _it(49)},
    (10, 20): {"cgm": _it(123), "bcv": _it(52)},
    (10, 50): {"cgm": _it(183), "bcv": _it(136)},
    (10, 100): {"cgm": _d(0.81, tau=0.8), "bcv": _it(271)},
    (20, 10): {"cgm": _d(6.8, tau=6.4), "bcv": _it(66)},
    (20, 20): {"cgm": _d(0.9, tau=0.8), "bcv": _it(67)},
    (20, 50): {"cgm": _d(0.48, tau=0.2), "bcv": _it(197)},
    (20, 100): {"cgm": _d(2.06, tau=1.6), "bcv": _it(468)},
}

REFERENCE: dict[int, dict[tuple[float, int], dict[str, ReferenceCell]]] = {
    1: _T1, 2: _T2, 3: _T3,
}


def reference_cell(series: int, beta: float, n: int,
                   method: str) -> ReferenceCell | None:
    return REFERENCE.get(series, {}).get((beta, n), {}).get(method)
