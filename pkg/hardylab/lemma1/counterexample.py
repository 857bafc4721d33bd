"""
Counterexample pipeline for means that are not weak-Hardy.

Given a homogeneous monotone mean M and a positive sequence a with divergent sum
and unbounded ratio sequence c_n = M(a_1..a_n) / a_n, the partition weights r
give a summable sequence b_n = a_n r_n whose prefix means satisfy

    M(b_1, ..., b_n) >= r_n * M(a_1, ..., a_n) = c_n a_n r_n

for every n, while sum a_n c_n r_n over block k is at least k/(k+1)^2. The
lower bounds sum to infinity, so sum M(b_1..b_n) diverges; at desk scale only the
structural bound over the materialized blocks is observable and reported.
"""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from hardylab.config import SETTINGS
from hardylab.csvio import atomic_write, render_csv
from hardylab.errors import CertificateViolation
from hardylab.hardy_analysis import (
    Holds,
    SeqSpec,
    TestVerdict,
    combine_divergence,
    prefix_ratios,
    ratio_divergence,
    sum_divergence,
)
from hardylab.lemma1.main import (
    BlockPartition,
    PartitionCase,
    build_blocks_case1,
    build_blocks_case2,
    emit_r,
)
from hardylab.means import MeanSpec, check_axioms, prefix_means
from hardylab.summation import running_sums

logger = logging.getLogger(__name__)

NOTES = [
    "block lower bounds use c_n itself; no separate c_n^* sequence is defined",
    "the gap map k -> n_(k+1) - n_k is enforced nondecreasing, not strictly increasing",
]


class CertificateCheck(BaseModel):
    """Per-n outcome of M(b_1..b_n) >= r_n * M(a_1..a_n)."""

    passed: List[bool]
    min_margin: float
    worst_at: int
    witness: Optional[dict] = None

    @property
    def all_passed(self) -> bool:
        return self.witness is None


class BlockIdentity(BaseModel):
    k: int
    start: int
    stop: int
    sum_ar: float
    expected_sum_ar: float
    sum_acr: float
    lower_bound_acr: float
    ok: bool


class CounterexampleSeries:
    """Per-n series of a constructed counterexample (kept out of the JSON)."""

    def __init__(self, b, sum_b, mean_sums, certificates):
        self.b = b
        self.sum_b = sum_b
        self.mean_sums = mean_sums
        self.certificates = certificates

    def to_csv(self, path=None) -> str:
        rows = zip(
            range(1, len(self.b) + 1),
            self.b,
            self.sum_b,
            self.mean_sums,
            self.certificates,
        )
        text = render_csv(("n", "b_n", "sum_b", "mean_sum", "certificate"), rows)
        if path is not None:
            atomic_write(path, text)
        return text


class CounterexampleReport(BaseModel):
    """Outcome of the pipeline: constructed, refused or unverified."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: str
    mean: dict
    seq: dict
    N: int
    reasons: List[str] = []
    axioms: dict = {}
    divergence: Optional[TestVerdict] = None
    case: Optional[PartitionCase] = None
    case_heuristic: bool = False
    n0: Optional[int] = None
    bound_on_a: Optional[float] = None
    bound_holds: Optional[bool] = None
    horizon: Optional[int] = None
    partition: Optional[BlockPartition] = None
    certificates_checked: int = 0
    certificates_passed: bool = False
    min_certificate_margin: Optional[float] = None
    block_identities: List[BlockIdentity] = []
    sum_b: Optional[float] = None
    sum_b_envelope: Optional[float] = None
    sum_b_bounded: Optional[bool] = None
    tail_decade_fraction: Optional[float] = None
    mean_sum: Optional[float] = None
    structural_bound: Optional[float] = None
    structural_bound_fraction: Optional[str] = None
    structural_bound_met: Optional[bool] = None
    r_strictly_decreasing: Optional[bool] = None
    truncation_conditional: bool = False
    notes: List[str] = []
    series: Optional[CounterexampleSeries] = Field(default=None, exclude=True)

    @property
    def constructed(self) -> bool:
        return self.status == "constructed"


def check_certificates(
    mean_a: Sequence[float],
    mean_b: Sequence[float],
    a: Sequence[float],
    r: Sequence[float],
    slack: float = SETTINGS.certificate_slack,
    raise_on_violation: bool = True,
) -> CertificateCheck:
    """
    Check M(b_1..b_n) >= c_n a_n r_n (= r_n M(a_1..a_n)) for every n.

    Raises:
        CertificateViolation: first n where the inequality fails by more than
            ``slack`` relative, when ``raise_on_violation`` is set
    """
    H = len(r)
    if min(len(mean_a), len(mean_b), len(a)) < H:
        raise ValueError(f"certificate series shorter than r ({H} terms)")
    passed = []
    witness = None
    margin, worst_at = math.inf, 1
    for n in range(1, H + 1):
        lhs = mean_b[n - 1]
        rhs = r[n - 1] * mean_a[n - 1]
        ok = lhs >= rhs * (1.0 - slack)
        passed.append(ok)
        relative = (lhs - rhs) / rhs
        if relative < margin:
            margin, worst_at = relative, n
        if not ok and witness is None:
            witness = {
                "n": n,
                "mean_b": lhs,
                "c_n": mean_a[n - 1] / a[n - 1],
                "a_n": a[n - 1],
                "r_n": r[n - 1],
                "bound": rhs,
            }
    check = CertificateCheck(
        passed=passed, min_margin=margin, worst_at=worst_at, witness=witness
    )
    if witness is not None and raise_on_violation:
        raise CertificateViolation(
            f"certificate fails at n={witness['n']}: "
            f"M(b_1..b_n) = {witness['mean_b']!r} < c_n a_n r_n = {witness['bound']!r}",
            witness,
        )
    return check


def _first_stable_crossing(c: Sequence[float]) -> Optional[int]:
    """Smallest n0 with c_n > 1 for every scanned n >= n0."""
    n0 = None
    for n in range(len(c), 0, -1):
        if c[n - 1] > 1:
            n0 = n
        else:
            break
    return n0


def _inf_is_zero(a, terms: Sequence[float]):
    """(inf a == 0, decided heuristically)"""
    if isinstance(a, SeqSpec):
        known = a.infimum_is_zero()
        if known is not None:
            return known, False
    return min(terms) <= SETTINGS.case_threshold * max(terms), True


def build_partition(
    a, terms: Sequence[float], c: Sequence[float], N: int
) -> Tuple[BlockPartition, bool]:
    """
    Case-one partition (weights a) when inf a > 0, case two otherwise.

    Returns the partition and whether the case was chosen from the prefix alone.
    """
    inf_zero, heuristic = _inf_is_zero(a, terms)
    if inf_zero:
        return build_blocks_case2(terms, c, N), heuristic
    return build_blocks_case1(c, terms, N), heuristic


def _block_identities(
    p: BlockPartition,
    terms: Sequence[float],
    c: Sequence[float],
    base: Sequence[float],
) -> List[BlockIdentity]:
    out = []
    tol = SETTINGS.identity_rtol
    for k, indices in enumerate(p.index_ranges()):
        lo, hi = indices.start - 1, indices.stop - 1
        sum_ar = math.fsum(terms[i] * base[i] for i in range(lo, hi))
        sum_acr = math.fsum(terms[i] * c[i] * base[i] for i in range(lo, hi))
        expected = 1.0 / (k + 1) ** 2
        lower = k / (k + 1) ** 2
        ok = abs(sum_ar - expected) <= tol * expected and sum_acr >= lower - tol
        out.append(
            BlockIdentity(
                k=k,
                start=indices.start,
                stop=indices.stop - 1,
                sum_ar=sum_ar,
                expected_sum_ar=expected,
                sum_acr=sum_acr,
                lower_bound_acr=lower,
                ok=ok,
            )
        )
    return out


def counterexample(
    spec: MeanSpec,
    a,
    N: int,
    window: Optional[int] = None,
    trials: int = 200,
    seed: int = 42,
) -> CounterexampleReport:
    """
    Construct a summable b with divergent sum of prefix means, with certificates.

    Preconditions are checked rather than assumed: M must pass the homogeneity
    and monotonicity axioms and the Hardy divergence test must hold for (M, a).
    A failed precondition yields a report with status "refused".

    Raises:
        CertificateViolation: a per-term certificate fails (M is not homogeneous
            and monotone after all, or a numerical fault)
    """
    seq_json = a.to_json() if isinstance(a, SeqSpec) else {"rule": "explicit"}
    report = CounterexampleReport(
        status="refused", mean=spec.to_json(), seq=seq_json, N=N
    )

    axioms = check_axioms(spec, trials=trials, seed=seed)
    report.axioms = {name: v.passed for name, v in axioms.verdicts.items()}
    window = window or max(1, N // 10)
    terms, m, c = prefix_ratios(spec, a, N)
    report.divergence = combine_divergence(
        sum_divergence(a, terms), ratio_divergence(c, window)
    )
    if not axioms.passes("homogeneity"):
        report.reasons.append("mean is not homogeneous on the sampled vectors")
    if not axioms.passes("monotonicity"):
        report.reasons.append("mean is not monotone on the sampled vectors")
    if report.divergence.holds is not Holds.HOLDS:
        report.reasons.append(
            f"divergence condition {report.divergence.holds.value}: sum a_n = infinity "
            "with c_n -> infinity is not established"
        )
    if report.reasons:
        logger.info("Refusing %s: %s", spec.display_label, "; ".join(report.reasons))
        return report

    n0 = _first_stable_crossing(c)
    report.n0 = n0
    report.bound_on_a = max(terms[:n0])
    report.bound_holds = max(terms) <= report.bound_on_a

    partition, heuristic = build_partition(a, terms, c, N)
    report.case_heuristic = heuristic
    report.case = partition.case
    report.partition = partition
    report.truncation_conditional = partition.truncation_conditional

    r = emit_r(partition, strictify=True, N=N)
    H = r.horizon
    report.horizon = H
    report.r_strictly_decreasing = r.strictly_decreasing()

    b = [terms[i] * r.values[i] for i in range(H)]
    mean_b = prefix_means(spec, b, H)
    check = check_certificates(m, mean_b, terms, r.values)
    report.certificates_checked = H
    report.certificates_passed = check.all_passed
    report.min_certificate_margin = check.min_margin

    report.block_identities = _block_identities(partition, terms, c, r.base)
    sum_b = running_sums(b)
    mean_sums = running_sums(mean_b)
    K = len(report.block_identities)
    report.sum_b = sum_b[-1]
    report.sum_b_envelope = 2.0 * math.fsum(1.0 / (k + 1) ** 2 for k in range(K))
    report.sum_b_bounded = report.sum_b <= report.sum_b_envelope * (
        1.0 + SETTINGS.identity_rtol
    )
    report.tail_decade_fraction = math.fsum(b[H // 10 : H]) / report.sum_b
    report.mean_sum = mean_sums[-1]
    bound = sum((Fraction(k, (k + 1) ** 2) for k in range(K)), Fraction(0))
    report.structural_bound = float(bound)
    report.structural_bound_fraction = str(bound)
    report.structural_bound_met = report.mean_sum >= report.structural_bound * (
        1.0 - SETTINGS.identity_rtol
    )
    report.notes = list(NOTES)
    if heuristic:
        report.notes.append("case chosen by the prefix threshold inf a > 1e-9 max a")
    report.series = CounterexampleSeries(b, sum_b, mean_sums, check.passed)

    identities_ok = all(item.ok for item in report.block_identities)
    if (
        check.all_passed
        and identities_ok
        and report.sum_b_bounded
        and report.r_strictly_decreasing
        and report.structural_bound_met
    ):
        report.status = "constructed"
    else:
        report.status = "unverified"
        if not identities_ok:
            report.reasons.append("block identities do not match")
        if not report.sum_b_bounded:
            report.reasons.append("sum of b exceeds its summable envelope")
        if not report.r_strictly_decreasing:
            report.reasons.append("strictified r is not strictly decreasing")
        if not report.structural_bound_met:
            report.reasons.append("prefix-mean sum is below the structural bound")
    log = logger.info if report.constructed else logger.warning
    log(
        "%s on %s: %s (%s, %d blocks, horizon %d)",
        spec.display_label,
        seq_json.get("rule"),
        report.status,
        partition.case.value,
        K,
        H,
    )
    return report
