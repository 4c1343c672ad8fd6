"""Problem documents: JSON round trip for shipped objective kinds.

Document layout:
    {"n": int, "a": [...], "beta": float, "lower": [...], "upper": [...],
     "objective": {"kind": str, "params": {...}}}

Generic kinds (quadratic, quadratic_log, quadratic_log_l1, portfolio) take
the feasible set from the document and the objective from params. Builder
kinds (svm_dual, market) reconstruct the whole instance from params and
require the document's feasible set to match the rebuilt one.
"""

from __future__ import annotations

import json
import numpy as np

from .applications import (MarketModel, PortfolioData, Quote, SvmDataset,
                           build_market, build_svm_dual)
from .objectives import (QuadraticLogObjective, QuadraticObjective,
                         SmoothedL1Objective, PortfolioObjective)
from .problem import BoxBounds, LinearEquality, ProblemError, ProblemInstance, build_problem

__all__ = ["to_document", "from_document", "save_problem", "load_problem",
           "OBJECTIVE_KINDS"]

OBJECTIVE_KINDS = ("quadratic", "quadratic_log", "quadratic_log_l1",
                   "svm_dual", "portfolio", "market")


def to_document(p: ProblemInstance) -> dict:
    spec = p.objective.spec
    if spec is None or "kind" not in spec:
        raise ProblemError(
            "objective carries no serialization spec; only shipped kinds "
            f"{OBJECTIVE_KINDS} can be saved")
    return {
        "n": p.n,
        "a": p.equality.a.tolist(),
        "beta": p.equality.beta,
        "lower": p.bounds.lower.tolist(),
        "upper": p.bounds.upper.tolist(),
        "objective": {"kind": spec["kind"], "params": spec["params"]},
    }


def _generic_objective(kind: str, params: dict):
    if kind == "quadratic":
        obj = QuadraticObjective(params["matrix"])
    elif kind == "quadratic_log":
        obj = QuadraticLogObjective(params["matrix"], params["c"], params["xi"])
    elif kind == "quadratic_log_l1":
        obj = SmoothedL1Objective(params["matrix"], params["c"], params["xi"],
                                  params["tau"])
    elif kind == "portfolio":
        obj = PortfolioObjective(
            params["covariance"], params["means"], params["target"],
            params["tau"], params["p"],
            params.get("smooth_eps") if params["p"] == 1 else None)
        # revalidate through the data holder
        PortfolioData(params["covariance"], params["means"], params["target"])
    else:
        raise ProblemError(f"unknown objective kind {kind!r}")
    obj.spec = {"kind": kind, "params": params}
    return obj


def from_document(doc: dict) -> ProblemInstance:
    try:
        kind = doc["objective"]["kind"]
        params = doc["objective"]["params"]
        n = int(doc["n"])
        a = np.asarray(doc["a"], dtype=float)
        beta = float(doc["beta"])
        lower = np.asarray(doc["lower"], dtype=float)
        upper = np.asarray(doc["upper"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ProblemError(f"malformed problem document: {exc}") from exc
    if a.shape != (n,) or lower.shape != (n,) or upper.shape != (n,):
        raise ProblemError("document arrays disagree with n")

    if kind in ("quadratic", "quadratic_log", "quadratic_log_l1", "portfolio"):
        return build_problem(BoxBounds(lower, upper), LinearEquality(a, beta),
                             _generic_objective(kind, params))
    if kind == "svm_dual":
        data = SvmDataset(params["features"], params["labels"])
        rebuilt = build_svm_dual(data, tau=params["tau"], p=params["p"],
                                 smooth_eps=params.get("smooth_eps", 1e-4),
                                 upper_cap=params.get("upper_cap", 1e3))
    elif kind == "market":
        model = MarketModel(
            traders=tuple(Quote(**row) for row in params["traders"]),
            buyers=tuple(Quote(**row) for row in params["buyers"]),
            b=params.get("b", 0.0))
        rebuilt, _ = build_market(model)
    else:
        raise ProblemError(f"unknown objective kind {kind!r}")

    same = (rebuilt.n == n
            and np.allclose(rebuilt.equality.a, a, atol=1e-9)
            and abs(rebuilt.equality.beta - beta) <= 1e-9 * max(1.0, abs(beta))
            and np.allclose(rebuilt.bounds.lower, lower, atol=1e-9)
            and np.allclose(rebuilt.bounds.upper, upper, atol=1e-9))
    if not same:
        raise ProblemError(
            f"document feasible set disagrees with the one {kind!r} builds")
    return rebuilt


def save_problem(p: ProblemInstance, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_document(p), fh, indent=2)
        fh.write("\n")


def load_problem(path) -> ProblemInstance:
    with open(path) as fh:
        return from_document(json.load(fh))
