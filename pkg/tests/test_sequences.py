import math

import pytest
from pydantic import ValidationError

from hardylab.errors import NumericalFault, SequenceError
from hardylab.hardy_analysis import SeqRule, SeqSpec, SeriesBuffer, seq_from_text


def test_closed_form_rules():
    assert SeqSpec.harmonic().terms(4) == [1.0, 0.5, 1 / 3, 0.25]
    assert SeqSpec.power_law(0.5).term(4) == 0.5
    assert SeqSpec.constant(2.0).terms(3) == [2.0, 2.0, 2.0]
    assert SeqSpec.geometric(0.5).term(3) == 0.125
    assert SeqSpec.custom("1/n^2").term(3) == pytest.approx(1 / 9)


def test_seq_from_text():
    assert seq_from_text("harmonic") == SeqSpec.harmonic()
    assert seq_from_text("geometric:1/2").q == 0.5
    assert seq_from_text("powerlaw:0.5").rule is SeqRule.POWER_LAW
    assert seq_from_text("power-law:1e-1").alpha == 0.1
    assert seq_from_text("explicit:1;0.5;1/4").values == [1.0, 0.5, 0.25]
    assert seq_from_text("explicit:1,2").values == [1.0, 2.0]
    assert seq_from_text("custom:exp(-n)").expr == "exp(-n)"
    with pytest.raises(ValueError, match="unknown sequence rule"):
        seq_from_text("fibonacci:1")
    with pytest.raises(ValueError):
        seq_from_text("geometric")
    with pytest.raises(ValueError):
        seq_from_text("geometric:half")


def test_seq_from_file(tmp_path):
    path = tmp_path / "seq.json"
    path.write_text('{"rule": "power_law", "alpha": 2}')
    assert seq_from_text(f"file:{path}") == SeqSpec.power_law(2)


def test_parameters_are_checked_per_rule():
    with pytest.raises(ValidationError):
        SeqSpec(rule=SeqRule.HARMONIC, q=0.5)
    with pytest.raises(ValidationError):
        SeqSpec(rule=SeqRule.GEOMETRIC)
    with pytest.raises(ValidationError):
        SeqSpec.geometric(-0.5)
    with pytest.raises(ValidationError):
        SeqSpec.explicit([1.0, 0.0])
    with pytest.raises(ValidationError):
        SeqSpec.custom("1/k")


def test_unusable_terms_raise():
    with pytest.raises(SequenceError):
        SeqSpec.custom("log(n)").term(1)
    with pytest.raises(SequenceError):
        SeqSpec.custom("n - 3").terms(5)
    with pytest.raises(SequenceError):
        SeqSpec.explicit([1.0, 0.5]).terms(3)
    with pytest.raises(SequenceError):
        SeqSpec.harmonic().term(0)


@pytest.mark.parametrize(
    "q, limit", [(0.5, 1022), (2.0, 1023), (0.1, 307)], ids=["half", "two", "tenth"]
)
def test_geometric_float_limit(q, limit):
    seq = SeqSpec.geometric(q)
    assert seq.float_limit == limit
    assert len(seq.terms(limit)) == limit
    assert seq.term(limit) > 0
    with pytest.raises(NumericalFault, match="normal float64"):
        seq.terms(limit + 1)
    with pytest.raises(NumericalFault):
        seq.term(limit + 1)


def test_float_limit_only_for_geometric_decay_or_growth():
    assert SeqSpec.geometric(1.0).float_limit is None
    assert SeqSpec.harmonic().float_limit is None
    assert len(SeqSpec.geometric(1.0).terms(5000)) == 5000


def test_out_of_range_terms_are_numerical_faults():
    with pytest.raises(NumericalFault):
        SeqSpec.geometric(0.5).term(2000)
    with pytest.raises(NumericalFault):
        SeqSpec.geometric(2.0).term(2000)
    with pytest.raises(NumericalFault):
        SeqSpec.custom("exp(-n)").term(1000)
    with pytest.raises(NumericalFault):
        SeqSpec.power_law(400).term(10)


def test_analytic_facts():
    assert SeqSpec.harmonic().sum_diverges()
    assert not SeqSpec.power_law(2).sum_diverges()
    assert SeqSpec.power_law(0.5).infimum_is_zero()
    assert not SeqSpec.constant(1).infimum_is_zero()
    assert SeqSpec.geometric(0.5).is_decreasing()
    assert SeqSpec.explicit([1.0]).sum_diverges() is None
    assert SeqSpec.custom("1/n").infimum_is_zero() is None


def test_json_form_and_labels():
    assert SeqSpec.geometric(0.5).to_json() == {"rule": "geometric", "q": 0.5}
    assert SeqSpec.power_law(0.5).display_label == "n^(-0.5)"
    assert SeqSpec.explicit([1, 2, 3]).display_label == "explicit[3]"


def test_series_buffer():
    buffer = SeriesBuffer.of(SeqSpec.harmonic(), 10)
    assert buffer.N == 10
    assert buffer.total == pytest.approx(math.fsum(1 / n for n in range(1, 11)))
    assert buffer.block_sum(2, 4) == pytest.approx(1 / 3 + 1 / 4)
    assert buffer.block_sum(4, 4) == 0.0
    with pytest.raises(SequenceError):
        SeriesBuffer.of([1.0, 2.0], 3)
