import math

import numpy as np
import pytest

from hardylab.config import checkpoint_spec
from hardylab.csvio import atomic_write, format_number, render_csv
from hardylab.hardy_analysis.convergence import (
    aitken,
    checkpoints,
    checkpoints_fall_back,
    contraction_ratio,
    log_fit,
    power_fit,
)
from hardylab.summation import CompensatedSum, running_sums


def test_compensated_sum_keeps_the_small_term():
    acc = CompensatedSum()
    for value in (1e16, 1.0, -1e16):
        acc.add(value)
    assert acc.value == 1.0


def test_running_sums_match_fsum():
    rng = np.random.default_rng(5)
    values = np.exp(rng.uniform(-20, 20, 5000)).tolist()
    sums = running_sums(values)
    for n in (1, 10, 999, 5000):
        assert sums[n - 1] == pytest.approx(math.fsum(values[:n]), rel=1e-15)


def test_at_least_decides_the_exact_comparison():
    acc = CompensatedSum()
    acc.add(0.5)
    acc.add(0.25)
    assert not acc.at_least(1.0)
    acc.add(0.25)
    assert acc.at_least(1.0)


def test_aitken_removes_a_geometric_error():
    x = [4.0 - 0.5**k for k in range(1, 4)]
    assert contraction_ratio(*x) == pytest.approx(0.5)
    assert aitken(*x) == pytest.approx(4.0)
    assert aitken(1.0, 1.0, 1.0) == 1.0
    assert contraction_ratio(1.0, 1.0, 1.0) == 0.0


def test_log_fit_recovers_the_slope():
    ns = [10**k for k in range(2, 7)]
    fit = log_fit(ns, [2.0 + 3.0 * math.log(n) for n in ns])
    assert fit.slope == pytest.approx(3.0)
    assert fit.intercept == pytest.approx(2.0)
    assert fit.slope_significant()
    flat = log_fit(ns, [1.0, 1.1, 0.9, 1.05, 0.95])
    assert not flat.slope_significant()


def test_power_fit():
    xs = [2, 3, 4, 5]
    assert power_fit(xs, [x**-1.5 for x in xs]) == pytest.approx(1.5)


def test_checkpoint_grid():
    assert checkpoints(100_000, 0.5) == [1000, 3162, 10000, 31623, 100000]
    assert checkpoints(2000, 0.5) == [500, 1000, 2000]
    assert checkpoints(50_000, [1000, 5000, 90_000]) == [1000, 5000, 50000]
    assert not checkpoints_fall_back(100_000, 0.5)
    assert checkpoints_fall_back(2000, 0.5)
    assert not checkpoints_fall_back(50_000, [1000, 5000])


def test_checkpoint_environment(monkeypatch):
    monkeypatch.setenv("HARDYLAB_CHECKPOINTS", "0.25")
    assert checkpoint_spec() == 0.25
    monkeypatch.setenv("HARDYLAB_CHECKPOINTS", "5000, 1000")
    assert checkpoint_spec() == [1000, 5000]
    monkeypatch.setenv("HARDYLAB_CHECKPOINTS", "often")
    with pytest.raises(ValueError):
        checkpoint_spec()
    monkeypatch.delenv("HARDYLAB_CHECKPOINTS")
    assert checkpoint_spec() == 0.5


def test_csv_numbers_are_lossless(tmp_path):
    assert format_number(0.1) == "0.10000000000000001"
    assert float(format_number(1 / 3)) == 1 / 3
    assert format_number(True) == "true"
    text = render_csv(("n", "value"), [(1, 0.5), (2, 0.25)])
    assert text == "n,value\n1,0.5\n2,0.25\n"
    path = atomic_write(tmp_path / "sub" / "series.csv", text)
    assert path.read_text() == text
    assert [p.name for p in path.parent.iterdir()] == ["series.csv"]
