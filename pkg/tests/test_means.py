import math

import numpy as np
import pytest
from pydantic import ValidationError

from hardylab.errors import MeanDomainError
from hardylab.means import (
    MeanFamily,
    MeanSpec,
    PositiveVector,
    accumulator_for,
    eval_mean,
    mean_from_text,
    prefix_means,
)


@pytest.mark.parametrize(
    "spec, vector, expected",
    [
        (MeanSpec.of("arithmetic"), [1, 2, 3], 2.0),
        (MeanSpec.of("geometric"), [1, 4], 2.0),
        (MeanSpec.of("harmonic"), [1, 2], 4.0 / 3.0),
        (MeanSpec.of("min"), [3, 1, 2], 1.0),
        (MeanSpec.of("max"), [3, 1, 2], 3.0),
        (MeanSpec.power(2), [1, 7], 5.0),
        (MeanSpec.power(-1), [1, 2], 4.0 / 3.0),
        (MeanSpec.power(0), [1, 4], 2.0),
        (MeanSpec.quasiarithmetic("log(x)"), [1, 4], 2.0),
        (MeanSpec.quasiarithmetic("x^3"), [1, 2], 4.5 ** (1 / 3)),
    ],
)
def test_eval_mean(spec, vector, expected):
    assert eval_mean(spec, vector) == pytest.approx(expected, rel=1e-12)


def test_quasiarithmetic_without_registered_inverse():
    spec = MeanSpec.quasiarithmetic("x^2 + x", domain=(0.01, 100))
    value = eval_mean(spec, [1.0, 3.0])
    assert value ** 2 + value == pytest.approx((2.0 + 12.0) / 2, rel=1e-12)


def test_power_mean_stays_finite_on_extreme_entries():
    assert eval_mean(MeanSpec.power(2), [1e200, 1e200]) == pytest.approx(1e200)
    assert eval_mean(MeanSpec.power(0.5), [1e-300, 1e-300]) == pytest.approx(1e-300)


def test_result_is_clamped_to_the_entry_range():
    vector = [0.1] * 10
    for family in ("arithmetic", "geometric", "harmonic"):
        assert eval_mean(MeanSpec.of(family), vector) == 0.1


def test_vector_domain_errors():
    with pytest.raises(MeanDomainError):
        eval_mean(MeanSpec.of("arithmetic"), [])
    with pytest.raises(MeanDomainError):
        PositiveVector((1.0, -2.0))
    with pytest.raises(MeanDomainError):
        eval_mean(MeanSpec.of("geometric"), [1.0, math.inf])
    with pytest.raises(MeanDomainError):
        eval_mean(MeanSpec.quasiarithmetic("log(x)", domain=(1, 10)), [0.5, 2])


def test_spec_validation():
    with pytest.raises(ValidationError):
        MeanSpec(family=MeanFamily.POWER)
    with pytest.raises(ValidationError):
        MeanSpec(family=MeanFamily.ARITHMETIC, p=2.0)
    with pytest.raises(ValidationError, match="not strictly monotone"):
        MeanSpec.quasiarithmetic("(x - 1)^2", domain=(0.1, 10))


def test_mean_from_text(tmp_path):
    assert mean_from_text("power:0.5") == MeanSpec.power(0.5)
    assert mean_from_text("Geometric").family is MeanFamily.GEOMETRIC
    assert mean_from_text("quasiarithmetic:log(x)").generator == "log(x)"
    path = tmp_path / "mean.json"
    path.write_text('{"family": "power", "p": 2}')
    assert mean_from_text(f"file:{path}") == MeanSpec.power(2)
    with pytest.raises(ValueError, match="unknown mean family"):
        mean_from_text("median")
    with pytest.raises(ValueError):
        mean_from_text("min:3")
    with pytest.raises(ValueError):
        mean_from_text("power")


def test_spec_json_form():
    assert MeanSpec.power(0.5).to_json() == {"family": "power", "p": 0.5}
    spec = MeanSpec.model_validate({"family": "quasiarithmetic", "generator": "x^3"})
    assert spec.display_label == "quasiarithmetic(x^3)"


@pytest.mark.parametrize(
    "spec",
    [
        MeanSpec.of("arithmetic"),
        MeanSpec.of("geometric"),
        MeanSpec.of("harmonic"),
        MeanSpec.of("min"),
        MeanSpec.of("max"),
        MeanSpec.power(0.5),
        MeanSpec.power(-2),
        MeanSpec.quasiarithmetic("log(x)"),
        MeanSpec.quasiarithmetic("x^3"),
    ],
    ids=lambda spec: spec.display_label,
)
def test_accumulators_match_batch_evaluation(spec):
    rng = np.random.default_rng(3)
    values = np.exp(rng.uniform(-5, 5, 10_000)).tolist()
    streamed = prefix_means(spec, values, len(values))
    for n in (1, 2, 17, 100, 1000, 5000, 10_000):
        assert streamed[n - 1] == pytest.approx(
            eval_mean(spec, values[:n]), rel=1e-12
        )


def test_power_accumulator_survives_rescaling():
    spec = MeanSpec.power(0.5)
    acc = accumulator_for(spec)
    values = [10.0 ** (-k) for k in range(0, 300, 3)]
    for value in values:
        acc.push(value)
    assert acc.value == pytest.approx(eval_mean(spec, values), rel=1e-12)


def test_accumulator_rejects_bad_terms():
    acc = accumulator_for(MeanSpec.of("arithmetic"))
    with pytest.raises(MeanDomainError):
        acc.value
    with pytest.raises(MeanDomainError):
        acc.push(0.0)


def test_failed_push_leaves_the_accumulator_untouched():
    acc = accumulator_for(MeanSpec.quasiarithmetic("log(x)", domain=(1, 10)))
    acc.push(2.0)
    with pytest.raises(MeanDomainError, match="term 2"):
        acc.push(20.0)
    assert acc.count == 1
    assert acc.high == 2.0
    assert acc.value == pytest.approx(2.0)
    acc.push(4.0)
    assert acc.count == 2
    assert acc.value == pytest.approx(math.sqrt(8.0), rel=1e-12)


@pytest.mark.parametrize(
    "p, family",
    [(-1, "harmonic"), (0, "geometric"), (1, "arithmetic")],
    ids=["harmonic", "geometric", "arithmetic"],
)
def test_power_mean_reduces_to_closed_families(p, family):
    rng = np.random.default_rng(11)
    power, closed = MeanSpec.power(p), MeanSpec.of(family)
    for _ in range(1000):
        vector = np.exp(rng.uniform(-5, 5, rng.integers(1, 21))).tolist()
        assert eval_mean(power, vector) == pytest.approx(
            eval_mean(closed, vector), rel=1e-12
        )


@pytest.mark.parametrize("p", [-1, 0.5, 2, 3])
def test_quasiarithmetic_power_generator_matches_power_mean(p):
    rng = np.random.default_rng(5)
    qa, power = MeanSpec.quasiarithmetic(f"x^{p}"), MeanSpec.power(p)
    for _ in range(200):
        vector = np.exp(rng.uniform(-5, 5, rng.integers(1, 21))).tolist()
        assert eval_mean(qa, vector) == pytest.approx(
            eval_mean(power, vector), rel=1e-10
        )
