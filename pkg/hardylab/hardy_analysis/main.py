#!/usr/bin/env python3
"""
Hardy Analysis

Estimates Hardy constants through the limit n * M(1, 1/2, ..., 1/n) and runs the
finite negative tests for the Hardy and weak-Hardy properties: divergence of the
ratio sequence c_n = M(a_1, ..., a_n) / a_n, near-monotonicity of c, summability
of a_n^(1+s) M(a_1, ..., a_n)^(-s) and logarithmic lower growth of the prefix
means.

Every test returns a tri-state ``TestVerdict`` together with the numbers that
triggered it. None of these tests can prove anything about the infinite
sequence; they report what the truncation shows.
"""

import logging
import math
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel

from hardylab.config import SETTINGS
from hardylab.csvio import atomic_write, render_csv
from hardylab.hardy_analysis.convergence import (
    aitken,
    checkpoints,
    checkpoints_fall_back,
    contraction_ratio,
    log_fit,
    power_fit,
)
from hardylab.hardy_analysis.sequences import SeqSpec, SeriesBuffer
from hardylab.means import MeanSpec, accumulator_for, check_axioms
from hardylab.means.accumulators import prefix_means

logger = logging.getLogger(__name__)

SeqLike = Union[SeqSpec, Sequence[float]]

MIN_ESTIMATE_N = 1000
CONTRACTING = 0.9
NON_CONTRACTING = 0.95
STABILIZED_GAP = 0.01


class Holds(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


class TestVerdict(BaseModel):
    """Outcome of one finite test; ``evidence`` holds the deciding numbers."""

    __test__ = False

    test: str
    holds: Holds
    evidence: Dict[str, Any] = {}
    heuristic: bool = False


class EstimateVerdict(str, Enum):
    CONVERGED = "converged"
    DIVERGING = "diverging"
    INCONCLUSIVE = "inconclusive"


class Checkpoint(BaseModel):
    n: int
    value: float


class HardyEstimate(BaseModel):
    """Trajectory of t_n = n * M(1, 1/2, ..., 1/n) at logarithmic checkpoints."""

    mean: dict
    N: int
    tol: float
    trajectory: List[Checkpoint]
    final: float
    verdict: EstimateVerdict
    diagnostics: Dict[str, Any]


class HardyRatio(BaseModel):
    """Sum of prefix means over sum of terms, with both partial sums."""

    ratio: float
    numerator: float
    denominator: float
    N: int
    numerator_partial_sums: List[float] = []
    denominator_partial_sums: List[float] = []

    def to_json(self, series: bool = False) -> dict:
        exclude = None if series else {
            "numerator_partial_sums",
            "denominator_partial_sums",
        }
        return self.model_dump(mode="json", exclude=exclude)


class WeakHardyReport(BaseModel):
    """Bundle of the finite weak-Hardy criteria for one (mean, sequence) pair."""

    mean: dict
    seq: dict
    N: int
    axioms: Dict[str, bool]
    sum_divergence: TestVerdict
    nearly_increasing: TestVerdict
    condition_iii: List[TestVerdict]
    main_theorem: TestVerdict
    log_growth: Optional[TestVerdict] = None
    criteria_met: List[str]
    conclusion: str


# --------------------------------------------------------------------------
# Hardy constant
# --------------------------------------------------------------------------


def hardy_constant_estimate(
    spec: MeanSpec,
    N: int,
    tol: float = 1e-3,
    checkpoint_grid: Union[float, List[int], None] = None,
) -> HardyEstimate:
    """
    Estimate Hc(M) as the limit of n * M(1, 1/2, ..., 1/n).

    Args:
        spec: Mean to estimate
        N: Largest index (>= 1000)
        tol: Relative drift below which the trajectory counts as converged
        checkpoint_grid: Step in decades or explicit indices; defaults to
            HARDYLAB_CHECKPOINTS or half-decade steps from 10^3

    Returns:
        HardyEstimate with verdict converged, diverging or inconclusive
    """
    if N < MIN_ESTIMATE_N:
        raise ValueError(
            f"hardy_constant_estimate needs N >= {MIN_ESTIMATE_N}, got {N}"
        )
    points = checkpoints(N, checkpoint_grid)
    fallback = checkpoints_fall_back(N, checkpoint_grid)
    if fallback:
        logger.warning(
            "Checkpoint grid too coarse for N=%d, using N/4, N/2, N = %s", N, points
        )
    acc = accumulator_for(spec)
    trajectory = []
    pending = iter(points)
    target = next(pending)
    for n in range(1, N + 1):
        a_n = 1.0 / n
        acc.push(a_n)
        if n == target:
            trajectory.append(Checkpoint(n=n, value=acc.value / a_n))
            logger.debug("t_%d = %.12g", n, trajectory[-1].value)
            target = next(pending, None)

    ns = [point.n for point in trajectory]
    values = [point.value for point in trajectory]
    final = values[-1]
    raw_drift = abs(values[-1] - values[-2]) / final
    rho = contraction_ratio(*values[-3:])
    extrapolate = aitken(*values[-3:])
    aitken_drift = None
    if len(values) >= 4:
        previous = aitken(*values[-4:-1])
        aitken_drift = abs(extrapolate - previous) / abs(extrapolate)
    fit = log_fit(ns, values)

    if raw_drift < tol:
        verdict, drift, drift_kind = EstimateVerdict.CONVERGED, raw_drift, "raw"
    elif rho <= CONTRACTING and aitken_drift is not None and aitken_drift < tol:
        verdict, drift, drift_kind = EstimateVerdict.CONVERGED, aitken_drift, "aitken"
    elif fit.slope_significant() and rho >= NON_CONTRACTING:
        verdict, drift, drift_kind = EstimateVerdict.DIVERGING, raw_drift, "raw"
    else:
        verdict, drift, drift_kind = EstimateVerdict.INCONCLUSIVE, raw_drift, "raw"

    diagnostics = {
        "drift": drift,
        "drift_kind": drift_kind,
        "raw_drift": raw_drift,
        "aitken_drift": aitken_drift,
        "contraction_ratio": rho if math.isfinite(rho) else None,
        "extrapolate": extrapolate,
        "fit": fit.as_dict(),
        "fallback_checkpoints": fallback,
    }
    logger.info(
        "%s: t_%d = %.8g (%s, drift %.3g)",
        spec.display_label,
        N,
        final,
        verdict.value,
        drift,
    )
    return HardyEstimate(
        mean=spec.to_json(),
        N=N,
        tol=tol,
        trajectory=trajectory,
        final=final,
        verdict=verdict,
        diagnostics=diagnostics,
    )


def hardy_ratio(spec: MeanSpec, a: SeqLike, N: int) -> HardyRatio:
    """(sum of M(a_1..a_n) for n <= N) / (sum of a_n for n <= N)."""
    terms = SeriesBuffer.of(a, N)
    means = SeriesBuffer(terms=prefix_means(spec, terms.terms, N))
    if terms.total <= 0:
        raise ValueError("hardy_ratio needs a positive denominator")
    return HardyRatio(
        ratio=means.total / terms.total,
        numerator=means.total,
        denominator=terms.total,
        N=N,
        numerator_partial_sums=means.partial_sums,
        denominator_partial_sums=terms.partial_sums,
    )


def prefix_ratios(
    spec: MeanSpec, a: SeqLike, N: int
) -> Tuple[List[float], List[float], List[float]]:
    """(a_n, M(a_1..a_n), c_n) for n = 1..N in one streaming pass."""
    terms = SeriesBuffer.of(a, N).terms
    means = prefix_means(spec, terms, N)
    ratios = [m / t for m, t in zip(means, terms)]
    return terms, means, ratios


def ratio_sequence(spec: MeanSpec, a: SeqLike, N: int) -> List[float]:
    """c_n = M(a_1, ..., a_n) / a_n for n = 1..N."""
    return prefix_ratios(spec, a, N)[2]


# --------------------------------------------------------------------------
# Divergence of the ratio sequence and of the series
# --------------------------------------------------------------------------


def sum_divergence(a: SeqLike, terms: Sequence[float]) -> TestVerdict:
    """
    Divergence of sum a_n: analytic for closed-form rules, otherwise judged by
    the doubling ratio q = S(N/2, N] / S(N/4, N/2] (q >= 0.99 divergent, q <= 0.9
    convergent).
    """
    if isinstance(a, SeqSpec):
        known = a.sum_diverges()
        if known is not None:
            return TestVerdict(
                test="sum_divergence",
                holds=Holds.HOLDS if known else Holds.FAILS,
                evidence={"source": "analytic", "rule": a.rule.value},
            )
    N = len(terms)
    quarter, half = N // 4, N // 2
    if quarter < 1:
        return TestVerdict(
            test="sum_divergence",
            holds=Holds.INCONCLUSIVE,
            evidence={"source": "heuristic", "reason": "prefix too short"},
            heuristic=True,
        )
    early = math.fsum(terms[quarter:half])
    late = math.fsum(terms[half:N])
    q = late / early
    if q >= 0.99:
        holds = Holds.HOLDS
    elif q <= 0.9:
        holds = Holds.FAILS
    else:
        holds = Holds.INCONCLUSIVE
    return TestVerdict(
        test="sum_divergence",
        holds=holds,
        evidence={
            "source": "heuristic",
            "doubling_ratio": q,
            "partial_sum": math.fsum(terms),
        },
        heuristic=True,
    )


def ratio_divergence(c: Sequence[float], window: Optional[int] = None) -> TestVerdict:
    """
    Whether c_n grows without bound on the truncation.

    holds: the minima of the trailing windows strictly increase across at least
    three windows, the last window's minimum exceeds every earlier value, and the
    samples at N/4, N/2, N do not contract (ratio >= 0.95).
    fails: the last window is constant, or the samples contract (ratio <= 0.9)
    and the last window's maximum lies within 1 % of their Aitken extrapolate.
    """
    N = len(c)
    window = window or max(1, N // 10)
    if N < 2 * window:
        raise ValueError(f"need N >= 2 * window, got N={N}, window={window}")

    count = N // window
    offset = N - count * window
    minima = [
        min(c[offset + j * window : offset + (j + 1) * window]) for j in range(count)
    ]
    run = 1
    for j in range(count - 1, 0, -1):
        if minima[j - 1] < minima[j]:
            run += 1
        else:
            break
    last_start = offset + (count - 1) * window
    last = c[last_start:]
    prior_max = max(c[:last_start])
    last_min, last_max = min(last), max(last)
    increasing = run >= 3 and last_min > prior_max

    samples = (c[max(N // 4, 1) - 1], c[max(N // 2, 1) - 1], c[N - 1])
    rho = contraction_ratio(*samples)
    extrapolate = aitken(*samples)
    gap = abs(last_max - extrapolate) / abs(extrapolate)
    constant_tail = last_max - last_min <= SETTINGS.identity_rtol * last_max

    if increasing and rho >= NON_CONTRACTING:
        holds = Holds.HOLDS
    elif constant_tail or (rho <= CONTRACTING and gap <= STABILIZED_GAP):
        holds = Holds.FAILS
    else:
        holds = Holds.INCONCLUSIVE
    evidence = {
        "window": window,
        "window_minima": minima,
        "increasing_run": run,
        "last_window_min": last_min,
        "last_window_max": last_max,
        "prior_max": prior_max,
        "samples": list(samples),
        "contraction_ratio": rho if math.isfinite(rho) else None,
        "stabilized_value": extrapolate,
        "relative_gap": gap,
        "constant_tail": constant_tail,
    }
    return TestVerdict(test="ratio_divergence", holds=holds, evidence=evidence)


def combine_divergence(sum_verdict: TestVerdict, c_verdict: TestVerdict) -> TestVerdict:
    if sum_verdict.holds is Holds.HOLDS and c_verdict.holds is Holds.HOLDS:
        holds = Holds.HOLDS
    elif c_verdict.holds is Holds.FAILS:
        holds = Holds.FAILS
    else:
        holds = Holds.INCONCLUSIVE
    evidence = {
        "sum_diverges": sum_verdict.model_dump(mode="json"),
        "ratio_diverges": c_verdict.model_dump(mode="json"),
    }
    if holds is Holds.HOLDS:
        evidence["conclusion"] = "not a Hardy mean (truncated evidence)"
    return TestVerdict(
        test="hardy_divergence",
        holds=holds,
        evidence=evidence,
        heuristic=sum_verdict.heuristic,
    )


def hardy_divergence_test(
    spec: MeanSpec, a: SeqLike, N: int, window: Optional[int] = None
) -> TestVerdict:
    """
    Evidence that sum a_n diverges while M(a_1, ..., a_n) / a_n tends to infinity.

    Both holding means M is not a Hardy mean (on the truncation); a bounded,
    stabilized ratio sequence makes the test fail.
    """
    window = window or max(1, N // 10)
    if N < 2 * window:
        raise ValueError(
            f"hardy_divergence_test needs N >= 2 * window ({N} < {2 * window})"
        )
    terms, _, c = prefix_ratios(spec, a, N)
    verdict = combine_divergence(sum_divergence(a, terms), ratio_divergence(c, window))
    log = logger.warning if verdict.holds is Holds.INCONCLUSIVE else logger.info
    log("Hardy divergence test for %s: %s", spec.display_label, verdict.holds.value)
    return verdict


# --------------------------------------------------------------------------
# Weak-Hardy criteria
# --------------------------------------------------------------------------


def nearly_increasing_epsilon(
    c: Sequence[float], N: Optional[int] = None
) -> Tuple[float, Tuple[int, int]]:
    """
    Largest eps with eps * c_m <= c_n for all m <= n <= N.

    Returns eps = min over n of c_n / max(c_1..c_n) and the first (m, n), 1-based,
    attaining it, with m the first index of the prefix maximum. A nondecreasing
    prefix gives exactly 1.0 at (1, 1).
    """
    N = len(c) if N is None else N
    if N < 1 or N > len(c):
        raise ValueError(f"need 1 <= N <= {len(c)}, got {N}")
    best, pair = math.inf, (1, 1)
    top, top_at = -math.inf, 0
    for n in range(1, N + 1):
        value = c[n - 1]
        if value > top:
            top, top_at = value, n
        ratio = value / top
        if ratio < best:
            best, pair = ratio, (top_at, n)
    return best, pair


def condition_iii_scan(
    a: SeqLike,
    m: Sequence[float],
    s_grid: Sequence[float],
    N: Optional[int] = None,
) -> List[TestVerdict]:
    """
    Heuristic summability of a_n^(1+s) * m_n^(-s) for every s in ``s_grid``.

    Decade block sums B_d cover (10^(d-1), 10^d]. The series is called convergent
    when the last decade (N/10, N] adds less than 1e-9 of the total while the
    block sums decrease, divergent when the block sums never decrease; otherwise
    the decay exponent beta of B_d ~ d^(-beta) over decades d >= 2 decides
    (beta >= 1.25 convergent, beta <= 0.8 divergent).
    """
    N = len(m) if N is None else N
    terms = SeriesBuffer.of(a, N).terms
    if len(m) < N:
        raise ValueError(f"prefix-mean series has {len(m)} terms, {N} needed")
    log_a = np.log(np.asarray(terms, dtype=float))
    log_m = np.log(np.asarray(m[:N], dtype=float))
    decades = int(math.floor(math.log10(N) + 1e-12))

    verdicts = []
    for s in s_grid:
        if not s > 0:
            raise ValueError(f"s must be positive, got {s}")
        values = np.exp((1.0 + s) * log_a - s * log_m).tolist()
        total = math.fsum(values)
        blocks = [
            math.fsum(values[(10 ** (d - 1) if d > 1 else 0) : 10**d])
            for d in range(1, decades + 1)
        ]
        tail_share = math.fsum(values[N // 10 : N]) / total
        decreasing = len(blocks) >= 2 and all(x > y for x, y in zip(blocks, blocks[1:]))
        never_decreasing = len(blocks) >= 2 and all(
            y >= x for x, y in zip(blocks, blocks[1:])
        )
        beta = None
        if len(blocks) >= 3 and all(block > 0 for block in blocks[1:]):
            beta = power_fit(range(2, len(blocks) + 1), blocks[1:])

        if tail_share < 1e-9 and decreasing:
            series, method = "convergent", "tail"
        elif never_decreasing:
            series, method = "divergent", "decade-blocks"
        elif beta is not None and beta >= 1.25:
            series, method = "convergent", "decay-exponent"
        elif beta is not None and beta <= 0.8:
            series, method = "divergent", "decay-exponent"
        else:
            series, method = "inconclusive", None
        holds = {
            "convergent": Holds.HOLDS,
            "divergent": Holds.FAILS,
        }.get(series, Holds.INCONCLUSIVE)
        if holds is Holds.INCONCLUSIVE:
            logger.warning("Condition (iii) scan inconclusive at s=%g", s)
        verdicts.append(
            TestVerdict(
                test="condition_iii",
                holds=holds,
                evidence={
                    "s": s,
                    "series": series,
                    "method": method,
                    "partial_sum": total,
                    "tail_share": tail_share,
                    "decade_sums": blocks,
                    "decay_exponent": beta,
                },
                heuristic=True,
            )
        )
    return verdicts


def log_growth_check(
    m: Sequence[float], C: float, D: float, n0: int, N: Optional[int] = None
) -> TestVerdict:
    """
    Check n * m_n >= C * (ln n)^D for every n in [n0, N].

    A failure reports the first violating n with both sides of the comparison.
    """
    N = len(m) if N is None else N
    if not (C > 0 and D > 0):
        raise ValueError(f"log_growth_check needs C > 0 and D > 0, got C={C}, D={D}")
    if not (N > n0 >= 2):
        raise ValueError(f"log_growth_check needs N > n0 >= 2, got N={N}, n0={n0}")
    if len(m) < N:
        raise ValueError(f"prefix-mean series has {len(m)} terms, {N} needed")
    margin, margin_at = math.inf, n0
    for n in range(n0, N + 1):
        lhs = n * m[n - 1]
        rhs = C * math.log(n) ** D
        if lhs < rhs:
            return TestVerdict(
                test="log_growth",
                holds=Holds.FAILS,
                evidence={
                    "C": C,
                    "D": D,
                    "n0": n0,
                    "first_violation": n,
                    "n_times_mean": lhs,
                    "bound": rhs,
                },
            )
        if lhs / rhs < margin:
            margin, margin_at = lhs / rhs, n
    return TestVerdict(
        test="log_growth",
        holds=Holds.HOLDS,
        evidence={
            "C": C,
            "D": D,
            "n0": n0,
            "N": N,
            "min_margin": margin,
            "at": margin_at,
        },
    )


def weak_hardy_test(
    spec: MeanSpec,
    a: SeqLike,
    N: int,
    s_grid: Sequence[float] = (0.5, 1.0, 2.0),
    window: Optional[int] = None,
    trials: int = 200,
    seed: int = 42,
    log_growth: Optional[Tuple[float, float, int]] = None,
) -> WeakHardyReport:
    """
    Run every finite criterion showing that M is not a weak-Hardy mean.

    The criteria share the axiom precondition (homogeneous and monotone):
    - main theorem: sum a_n diverges and c_n tends to infinity;
    - nearly-increasing: sum a_n diverges, c is nearly increasing and divergent,
      and sum a_n^(1+s) m_n^(-s) is finite for some s in ``s_grid``;
    - log growth (needs repetition invariance too): n * m_n >= C (ln n)^D from
      n0 on, when ``log_growth = (C, D, n0)`` is given.
    """
    report = check_axioms(spec, trials=trials, seed=seed)
    axioms = {name: verdict.passed for name, verdict in report.verdicts.items()}
    admissible = axioms["homogeneity"] and axioms["monotonicity"]

    terms, m, c = prefix_ratios(spec, a, N)
    sums = sum_divergence(a, terms)
    c_verdict = ratio_divergence(c, window)
    main = combine_divergence(sums, c_verdict)

    eps, pair = nearly_increasing_epsilon(c)
    eps_half, _ = nearly_increasing_epsilon(c, max(1, N // 2))
    stable = eps > 0 and eps >= eps_half * (1 - SETTINGS.axiom_rtol)
    if stable and c_verdict.holds is Holds.HOLDS:
        nearly = Holds.HOLDS
    elif c_verdict.holds is Holds.FAILS:
        nearly = Holds.FAILS
    else:
        nearly = Holds.INCONCLUSIVE
    nearly_verdict = TestVerdict(
        test="nearly_increasing",
        holds=nearly,
        evidence={
            "epsilon": eps,
            "argmin": list(pair),
            "epsilon_first_half": eps_half,
            "stable": stable,
            "ratio_divergence": c_verdict.holds.value,
        },
    )
    scan = condition_iii_scan(terms, m, s_grid, N)

    growth = None
    if log_growth is not None:
        C, D, n0 = log_growth
        growth = log_growth_check(m, C, D, n0, N)

    criteria = []
    if admissible and main.holds is Holds.HOLDS:
        criteria.append("main_theorem")
    if (
        admissible
        and sums.holds is Holds.HOLDS
        and nearly is Holds.HOLDS
        and any(v.holds is Holds.HOLDS for v in scan)
    ):
        criteria.append("nearly_increasing")
    if (
        growth is not None
        and growth.holds is Holds.HOLDS
        and admissible
        and axioms["repetition"]
    ):
        criteria.append("log_growth")
    conclusion = "not-weak-hardy" if criteria else "inconclusive"
    logger.info("Weak-Hardy criteria for %s: %s", spec.display_label, conclusion)
    return WeakHardyReport(
        mean=spec.to_json(),
        seq=a.to_json() if isinstance(a, SeqSpec) else {"rule": "explicit"},
        N=N,
        axioms=axioms,
        sum_divergence=sums,
        nearly_increasing=nearly_verdict,
        condition_iii=scan,
        main_theorem=main,
        log_growth=growth,
        criteria_met=criteria,
        conclusion=conclusion,
    )


def export_series_csv(
    series: Sequence[float], path=None, start: int = 1
) -> str:
    """Render a series as CSV ``n,value`` (17 significant digits)."""
    rows = ((start + i, float(v)) for i, v in enumerate(series))
    text = render_csv(("n", "value"), rows)
    if path is not None:
        atomic_write(path, text)
    return text
