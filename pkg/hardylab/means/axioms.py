"""
Sampling checks for the mean axioms.

Six properties are tested on seeded random positive vectors: the mean-value
bounds, permutation symmetry, homogeneity, coordinatewise monotonicity,
repetition invariance and midpoint (Jensen) concavity. Midpoint concavity is the
finitely checkable stand-in for Jensen concavity; for continuous means the two
coincide.
"""

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from hardylab.config import SETTINGS
from hardylab.errors import ExprDomainError, MeanDomainError
from hardylab.means.main import MeanSpec, eval_mean

logger = logging.getLogger(__name__)

AXIOMS = (
    "bounds",
    "symmetry",
    "homogeneity",
    "monotonicity",
    "repetition",
    "concavity",
)

REPETITIONS = (2, 3, 7)


class AxiomVerdict(BaseModel):
    """Outcome of one axiom over all trials."""

    axiom: str
    passed: bool
    worst_violation: float = 0.0
    checked: int = 0
    skipped: int = 0
    witness: Optional[dict] = None


class PropertyReport(BaseModel):
    """Per-axiom verdicts for one mean, reproducible from ``seed``."""

    mean: dict
    trials: int
    seed: int
    dim_range: Tuple[int, int]
    tolerance: float
    verdicts: Dict[str, AxiomVerdict]

    @property
    def passed(self) -> bool:
        return all(verdict.passed for verdict in self.verdicts.values())

    def passes(self, *axioms: str) -> bool:
        return all(self.verdicts[name].passed for name in axioms)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _floats(values) -> List[float]:
    return [float(value) for value in values]


class _AxiomRecorder:
    def __init__(self, tolerance: float):
        self.tolerance = tolerance
        self.verdicts = {name: AxiomVerdict(axiom=name, passed=True) for name in AXIOMS}

    def record(self, name: str, violation: float, witness: Callable[[], dict]):
        verdict = self.verdicts[name]
        verdict.checked += 1
        verdict.worst_violation = max(verdict.worst_violation, violation)
        if violation > self.tolerance and verdict.passed:
            verdict.passed = False
            verdict.witness = {**witness(), "violation": violation}

    def skip(self, name: str):
        self.verdicts[name].skipped += 1


def _check_trial(
    M: Callable[[Sequence[float]], float],
    rec: _AxiomRecorder,
    trial: int,
    x: np.ndarray,
    y: np.ndarray,
    perm: np.ndarray,
    t: float,
    m: int,
    index: int,
    bump: float,
) -> None:
    def guarded(name, check):
        try:
            check()
        except (MeanDomainError, ExprDomainError):
            rec.skip(name)

    mx = M(x)

    def bounds():
        low, high = float(x.min()), float(x.max())
        violation = max(0.0, low - mx, mx - high) / mx
        rec.record(
            "bounds",
            violation,
            lambda: {
                "trial": trial,
                "x": _floats(x),
                "M(x)": mx,
                "min": low,
                "max": high,
            },
        )

    def symmetry():
        permuted = x[perm]
        value = M(permuted)
        rec.record(
            "symmetry",
            _rel(value, mx),
            lambda: {
                "trial": trial,
                "x": _floats(x),
                "permuted": _floats(permuted),
                "M(x)": mx,
                "M(permuted)": value,
            },
        )

    def homogeneity():
        value = M(t * x)
        rec.record(
            "homogeneity",
            _rel(value, t * mx),
            lambda: {
                "trial": trial,
                "x": _floats(x),
                "t": t,
                "M(t*x)": value,
                "t*M(x)": t * mx,
            },
        )

    def monotonicity():
        raised = x.copy()
        raised[index] *= bump
        value = M(raised)
        rec.record(
            "monotonicity",
            max(0.0, mx - value) / mx,
            lambda: {
                "trial": trial,
                "x": _floats(x),
                "raised": _floats(raised),
                "M(x)": mx,
                "M(raised)": value,
            },
        )

    def repetition():
        repeated = np.repeat(x, m)
        value = M(repeated)
        rec.record(
            "repetition",
            _rel(value, mx),
            lambda: {
                "trial": trial,
                "x": _floats(x),
                "m": m,
                "M(repeated)": value,
                "M(x)": mx,
            },
        )

    def concavity():
        my = M(y)
        mid = M((x + y) / 2.0)
        chord = (mx + my) / 2.0
        rec.record(
            "concavity",
            max(0.0, chord - mid) / chord,
            lambda: {
                "trial": trial,
                "x": _floats(x),
                "y": _floats(y),
                "M((x+y)/2)": mid,
                "(M(x)+M(y))/2": chord,
            },
        )

    for name, check in (
        ("bounds", bounds),
        ("symmetry", symmetry),
        ("homogeneity", homogeneity),
        ("monotonicity", monotonicity),
        ("repetition", repetition),
        ("concavity", concavity),
    ):
        guarded(name, check)


def check_axioms(
    spec: MeanSpec,
    trials: int = 1000,
    dim_range: Tuple[int, int] = (1, 8),
    seed: int = 42,
    pairs: Sequence[Tuple[Sequence[float], Sequence[float]]] = (),
    tolerance: float = SETTINGS.axiom_rtol,
    mean: Optional[Callable[[Sequence[float]], float]] = None,
) -> PropertyReport:
    """
    Check the six mean axioms on seeded random vectors.

    Args:
        spec: The mean under test
        trials: Number of random trials (>= 1)
        dim_range: Inclusive range of vector dimensions
        seed: Seed of the numpy generator; the same seed reproduces every witness
        pairs: Hand-chosen (x, y) vectors checked before the random trials
        tolerance: Relative violation above which an axiom fails
        mean: Override of the evaluator (used to audit synthetic means)

    Returns:
        PropertyReport with one verdict per axiom; failures carry the first witness
    """
    if trials < 1:
        raise ValueError(f"check_axioms needs trials >= 1, got {trials}")
    lo_dim, hi_dim = dim_range
    if not (1 <= lo_dim <= hi_dim):
        raise ValueError(f"invalid dimension range {dim_range}")

    M = mean or (lambda v: eval_mean(spec, v))
    rec = _AxiomRecorder(tolerance)
    rng = np.random.default_rng(seed)
    low, high = math.log(1e-3), math.log(1e3)
    if spec.generator is not None:
        d_lo, d_hi = spec.working_domain
        low, high = max(low, math.log(d_lo) + 1), min(high, math.log(d_hi) - 1)

    for number, (px, py) in enumerate(pairs):
        x, y = np.asarray(px, dtype=float), np.asarray(py, dtype=float)
        dim = len(x)
        _check_trial(M, rec, -(number + 1), x, y, np.arange(dim)[::-1], 2.0, 2, 0, 1.5)

    for trial in range(trials):
        dim = int(rng.integers(lo_dim, hi_dim + 1))
        x = np.exp(rng.uniform(low, high, dim))
        y = np.exp(rng.uniform(low, high, dim))
        perm = rng.permutation(dim)
        t = float(np.exp(rng.uniform(math.log(1e-2), math.log(1e2))))
        m = int(rng.choice(REPETITIONS))
        index = int(rng.integers(dim))
        bump = 1.0 + float(rng.uniform(0.0, 1.0))
        _check_trial(M, rec, trial, x, y, perm, t, m, index, bump)

    report = PropertyReport(
        mean=spec.to_json(),
        trials=trials,
        seed=seed,
        dim_range=(lo_dim, hi_dim),
        tolerance=tolerance,
        verdicts=rec.verdicts,
    )
    failed = [name for name, verdict in report.verdicts.items() if not verdict.passed]
    if failed:
        logger.info("%s fails %s", spec.display_label, ", ".join(failed))
    else:
        logger.info("%s passes all axioms over %d trials", spec.display_label, trials)
    return report
