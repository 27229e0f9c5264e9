"""Log-log exponent fits for N-sweeps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float
    points: tuple  # ((N, value), ...)

    def to_dict(self):
        return {"slope": self.slope, "intercept": self.intercept,
                "r2": self.r_squared, "n_points": len(self.points)}


def fit_exponent(points) -> ExponentFit:
    """Least squares on (log N, log value); needs >= 3 distinct positive points."""
    pts = [(float(n), float(v)) for n, v in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    ns = np.array([p[0] for p in pts])
    vs = np.array([p[1] for p in pts])
    if len(np.unique(ns)) != len(ns):
        raise ValueError("Ns distinct")
    if np.any(vs <= 0) or np.any(ns <= 0):
        raise ValueError("nonpositive value")
    x, y = np.log(ns), np.log(vs)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - float((resid ** 2).sum()) / ss_tot
    return ExponentFit(float(slope), float(intercept), r2, tuple(pts))
