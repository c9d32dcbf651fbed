"""Least-squares fits of scan tables against three growth models.

Exactly the three shapes the analyses distinguish are offered: a*n + b,
a*n*log2(n) + b, and a*n^2 + b. Model selection at desk scale is advisory;
all three residuals are always reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MODEL_NAMES = ("linear", "nlogn", "quadratic")

_BASIS = {
    "linear": lambda n: float(n),
    "nlogn": lambda n: n * math.log2(n),
    "quadratic": lambda n: float(n * n),
}


@dataclass(frozen=True)
class ModelFit:
    a: float
    b: float
    rss: float


@dataclass(frozen=True)
class FitReport:
    models: dict[str, ModelFit]
    best_model: str
    few_points_caveat: bool

    def to_json_dict(self) -> dict:
        return {
            "models": {name: {"a": m.a, "b": m.b, "rss": m.rss}
                       for name, m in self.models.items()},
            "best_model": self.best_model,
            "few_points_caveat": self.few_points_caveat,
        }


def fit_models(table: list[tuple[int, float]]) -> FitReport:
    """Closed-form least squares of (n, value) rows for each model.

    Requires at least two points, all with n >= 2 and not all n equal
    (degenerate design). Deterministic.
    """
    points = [(int(n), float(v)) for n, v in table]
    if len(points) < 2:
        raise ValueError("need at least 2 points to fit")
    if any(n < 2 for n, _ in points):
        raise ValueError("fitting requires n >= 2 for every point")
    if len({n for n, _ in points}) < 2:
        raise ValueError("degenerate table: all n equal")
    if any(not math.isfinite(v) for _, v in points):
        raise ValueError("cannot fit non-finite values")
    ys = np.array([v for _, v in points], dtype=float)
    models = {}
    for name in MODEL_NAMES:
        basis = _BASIS[name]
        design = np.column_stack([
            np.array([basis(n) for n, _ in points]),
            np.ones(len(points)),
        ])
        coef, _res, _rank, _sv = np.linalg.lstsq(design, ys, rcond=None)
        pred = design @ coef
        rss = float(np.sum((pred - ys) ** 2))
        models[name] = ModelFit(float(coef[0]), float(coef[1]), rss)
    best_model = min(models, key=lambda name: (models[name].rss, name))
    return FitReport(models, best_model, few_points_caveat=len(points) < 4)
