import pytest

from hardylab.means import AXIOMS, MeanSpec, check_axioms


@pytest.mark.parametrize(
    "spec",
    [
        MeanSpec.of("arithmetic"),
        MeanSpec.of("geometric"),
        MeanSpec.of("harmonic"),
        MeanSpec.of("min"),
        MeanSpec.power(0.5),
        MeanSpec.power(-1),
        MeanSpec.quasiarithmetic("log(x)"),
    ],
    ids=lambda spec: spec.display_label,
)
def test_concave_means_pass_every_axiom(spec):
    report = check_axioms(spec, trials=1000, seed=42)
    assert report.passed, {
        name: v.witness for name, v in report.verdicts.items() if not v.passed
    }
    assert set(report.verdicts) == set(AXIOMS)
    assert report.verdicts["bounds"].checked == 1000


def test_max_fails_concavity_only():
    report = check_axioms(MeanSpec.of("max"), trials=500, seed=1)
    failed = [name for name, v in report.verdicts.items() if not v.passed]
    assert failed == ["concavity"]
    witness = report.verdicts["concavity"].witness
    assert witness["M((x+y)/2)"] < witness["(M(x)+M(y))/2"]
    assert witness["violation"] > 0


def test_convex_power_mean_fails_concavity():
    report = check_axioms(MeanSpec.power(3), trials=500, seed=1)
    assert report.passes("bounds", "symmetry", "homogeneity", "monotonicity")
    assert not report.verdicts["concavity"].passed


def test_given_pairs_run_before_random_trials():
    report = check_axioms(
        MeanSpec.of("max"), trials=1, seed=0, pairs=[([1.0, 2.0], [2.0, 1.0])]
    )
    witness = report.verdicts["concavity"].witness
    assert witness["trial"] == -1
    assert witness["violation"] == pytest.approx(0.25)


def test_synthetic_mean_override():
    def not_homogeneous(v):
        return sum(v) / len(v) + 1.0

    report = check_axioms(MeanSpec.of("arithmetic"), trials=50, mean=not_homogeneous)
    assert not report.verdicts["homogeneity"].passed
    assert not report.verdicts["bounds"].passed
    assert report.verdicts["monotonicity"].passed


def test_same_seed_reproduces_the_report():
    first = check_axioms(MeanSpec.of("max"), trials=200, seed=9)
    second = check_axioms(MeanSpec.of("max"), trials=200, seed=9)
    assert first.model_dump() == second.model_dump()


def test_invalid_arguments():
    with pytest.raises(ValueError):
        check_axioms(MeanSpec.of("min"), trials=0)
    with pytest.raises(ValueError):
        check_axioms(MeanSpec.of("min"), dim_range=(3, 2))
