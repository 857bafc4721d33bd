"""Full-size runs at N = 10^6; deselect with ``-m "not slow"``."""

import math

import pytest

from hardylab.hardy_analysis import (
    EstimateVerdict,
    Holds,
    SeqSpec,
    hardy_constant_estimate,
    hardy_divergence_test,
    weak_hardy_test,
)
from hardylab.lemma1 import counterexample
from hardylab.means import MeanSpec

from .conftest import harmonic_number

pytestmark = pytest.mark.slow

N = 1_000_000


def test_carleman_constant(geometric):
    estimate = hardy_constant_estimate(geometric, N)
    assert estimate.verdict is EstimateVerdict.CONVERGED
    assert 2.7173 <= estimate.final <= 2.7193
    assert estimate.final < math.e


@pytest.mark.parametrize(
    "p, limit, tolerance",
    [(0.5, 4.0, 0.04), (0.25, (4 / 3) ** 4, 0.032)],
)
def test_power_mean_constants(p, limit, tolerance):
    estimate = hardy_constant_estimate(MeanSpec.power(p), N)
    assert estimate.verdict is EstimateVerdict.CONVERGED
    assert estimate.final == pytest.approx(limit, abs=tolerance)


def test_arithmetic_mean_has_no_hardy_constant(arithmetic):
    estimate = hardy_constant_estimate(arithmetic, N)
    assert estimate.verdict is EstimateVerdict.DIVERGING
    assert estimate.final == pytest.approx(14.393, abs=0.01)
    assert estimate.final == pytest.approx(harmonic_number(N), rel=1e-12)


def test_divergence_test_at_full_size(arithmetic, harmonic_seq):
    assert hardy_divergence_test(arithmetic, harmonic_seq, N).holds is Holds.HOLDS
    power = hardy_divergence_test(MeanSpec.power(0.5), harmonic_seq, N)
    assert power.holds is Holds.FAILS


def test_weak_hardy_criteria_at_full_size(arithmetic, harmonic_seq):
    report = weak_hardy_test(arithmetic, harmonic_seq, N, log_growth=(1.0, 1.0, 2))
    assert report.conclusion == "not-weak-hardy"
    assert "main_theorem" in report.criteria_met


def test_counterexample_at_full_size(arithmetic, harmonic_seq):
    report = counterexample(arithmetic, harmonic_seq, N)
    assert report.status == "constructed", report.reasons
    assert report.certificates_checked == report.horizon
    assert report.sum_b <= report.sum_b_envelope
    assert report.structural_bound_met


@pytest.mark.parametrize(
    "mean, expected",
    [
        ("arithmetic", "not-weak-hardy"),
        ("geometric", "hardy"),
        ("power:0.5", "hardy"),
    ],
)
def test_equivalence_dichotomy(cli_report, mean, expected):
    code, report = cli_report("equivalence", "-m", mean, "-n", "100000")
    assert code == 0
    assert report["result"]["dichotomy"] == expected


def test_refusal_for_a_hardy_mean():
    report = counterexample(MeanSpec.of("geometric"), SeqSpec.harmonic(), N)
    assert report.status == "refused"
