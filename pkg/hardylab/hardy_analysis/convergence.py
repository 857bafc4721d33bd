"""
Convergence diagnostics for slowly varying trajectories.

Aitken's delta-squared extrapolation removes a geometric error component from
three equally spaced samples; the contraction ratio of successive differences
tells whether such a component dominates (ratio well below 1) or whether the
trajectory keeps growing by the same amount per step (ratio near 1, typical of
logarithmic growth sampled at geometric checkpoints).
"""

import math
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from hardylab.config import SETTINGS, checkpoint_spec


@dataclass(frozen=True)
class LogFit:
    """Least-squares fit value ~ intercept + slope * ln(n)."""

    intercept: float
    slope: float
    slope_stderr: float
    ssr_log: float
    ssr_constant: float

    def slope_significant(self, sigmas: float = 10.0) -> bool:
        return self.slope > 0 and self.slope > sigmas * self.slope_stderr

    def as_dict(self) -> dict:
        return {
            "intercept": self.intercept,
            "slope": self.slope,
            "slope_stderr": self.slope_stderr,
            "ssr_log": self.ssr_log,
            "ssr_constant": self.ssr_constant,
        }


def contraction_ratio(x0: float, x1: float, x2: float) -> float:
    """(x2 - x1) / (x1 - x0); 0 for a constant triple."""
    d1, d2 = x1 - x0, x2 - x1
    if d1 == 0:
        return 0.0 if d2 == 0 else math.inf
    return d2 / d1


def aitken(x0: float, x1: float, x2: float) -> float:
    """Aitken delta-squared extrapolate; the last sample when the triple is flat."""
    d1, d2 = x1 - x0, x2 - x1
    denom = d2 - d1
    if denom == 0 or not math.isfinite(denom):
        return x2
    return x2 - d2 * d2 / denom


def log_fit(ns: Sequence[int], values: Sequence[float]) -> LogFit:
    """Fit a constant-plus-logarithm model and its standard error."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.asarray(values, dtype=float)
    design = np.column_stack([np.ones_like(x), x])
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ coef
    ssr_log = float(residual @ residual)
    ssr_constant = float(np.sum((y - y.mean()) ** 2))
    dof = len(y) - 2
    stderr = math.inf
    if dof > 0 and rank == 2:
        sigma2 = ssr_log / dof
        cov = sigma2 * np.linalg.inv(design.T @ design)
        stderr = float(math.sqrt(max(cov[1, 1], 0.0)))
    elif rank == 2:
        stderr = 0.0
    return LogFit(
        intercept=float(coef[0]),
        slope=float(coef[1]),
        slope_stderr=stderr,
        ssr_log=ssr_log,
        ssr_constant=ssr_constant,
    )


def power_fit(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Exponent beta of ys ~ xs^(-beta), by least squares on logarithms."""
    log_x = np.log(np.asarray(xs, float))
    slope, _ = np.polyfit(log_x, np.log(np.asarray(ys, float)), 1)
    return float(-slope)


def _planned_checkpoints(N: int, spec: Union[float, List[int], None]) -> List[int]:
    spec = checkpoint_spec() if spec is None else spec
    if isinstance(spec, list):
        return sorted({n for n in spec if n < N} | {N})
    points, exponent = [], math.log10(SETTINGS.checkpoint_start)
    while True:
        n = int(round(10**exponent))
        if n >= N:
            break
        points.append(n)
        exponent += spec
    return sorted(set(points) | {N})


def checkpoints_fall_back(N: int, spec: Union[float, List[int], None] = None) -> bool:
    """True when the grid leaves fewer than three checkpoints up to N."""
    return len(_planned_checkpoints(N, spec)) < 3


def checkpoints(N: int, spec: Union[float, List[int], None] = None) -> List[int]:
    """
    Logarithmically spaced checkpoints 10^3, 10^(3+step), ... up to N.

    N itself is always the last checkpoint. When fewer than three checkpoints
    fit, N/4, N/2 and N are used so that a contraction ratio is defined. These
    may lie below 10^3.
    """
    points = _planned_checkpoints(N, spec)
    if len(points) < 3:
        points = sorted({max(1, N // 4), max(1, N // 2), N})
    return points
