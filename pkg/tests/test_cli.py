import json

import jsonschema
import pytest

from hardylab.cli import main as cli_main
from hardylab.cli.main import app
from hardylab.cli.reports import Command, RunConfig, resolve_config
from hardylab.errors import NumericalFault


def test_eval_report(cli_report, report_schema):
    code, report = cli_report("eval", "--mean", "arithmetic", "--vector", "1,2,3")
    assert code == 0
    assert report["tool"] == "hardylab"
    assert report["command"] == "eval"
    assert report["result"]["value"] == 2.0
    assert report["config"]["vector"] == [1.0, 2.0, 3.0]
    jsonschema.validate(report, report_schema)


@pytest.mark.parametrize(
    "args",
    [
        ("hardy-constant", "--mean", "min", "--n", "1000"),
        ("test-hardy", "--mean", "arithmetic", "--seq", "harmonic", "-n", "2000"),
        ("ratios", "-m", "geometric", "-s", "harmonic", "-n", "50"),
        ("hardy-ratio", "-m", "max", "-s", "harmonic", "-n", "100"),
        ("axioms", "-m", "power:0.5", "--trials", "50"),
        (
            "counterexample",
            "-m",
            "power:0.5",
            "-s",
            "harmonic",
            "-n",
            "2000",
            "--trials",
            "50",
        ),
        ("lemma1", "-m", "arithmetic", "-s", "harmonic", "-n", "500"),
    ],
    ids=lambda args: args[0],
)
def test_reports_match_the_schema(cli_report, report_schema, args):
    code, report = cli_report(*args)
    assert code == 0
    jsonschema.validate(report, report_schema)


def test_hardy_ratio_report_values(cli_report):
    code, report = cli_report("hardy-ratio", "-m", "max", "-s", "harmonic", "-n", "100")
    assert code == 0
    assert report["result"]["ratio"] == pytest.approx(19.277, abs=1e-3)


def test_equivalence_of_the_minimum(cli_report, report_schema):
    code, report = cli_report(
        "equivalence", "-m", "min", "-n", "1000", "--trials", "50"
    )
    assert code == 0
    jsonschema.validate(report, report_schema)
    assert report["result"]["dichotomy"] == "hardy"
    assert report["result"]["counterexample"]["status"] == "refused"


@pytest.mark.parametrize(
    "args",
    [
        ("eval", "--mean", "median", "--vector", "1,2"),
        ("eval", "--mean", "arithmetic", "--vector", "1,x"),
        ("eval", "--mean", "arithmetic", "--vector", "1,-2"),
        ("eval", "--mean", "arithmetic"),
        ("hardy-ratio", "--mean", "arithmetic", "-n", "10"),
        ("test-weak-hardy", "-m", "arithmetic", "-s", "harmonic", "--log-c", "1"),
        ("axioms", "-m", "max", "--output", "csv"),
        ("ratios", "-m", "min", "-s", "explicit:1;2", "-n", "5"),
        ("hardy-constant", "-m", "arithmetic", "-n", "10"),
        ("lemma1", "-m", "min", "-s", "constant:1", "-n", "100"),
    ],
)
def test_usage_and_validation_errors_exit_with_2(cli_report, args):
    code, report = cli_report(*args)
    assert code == 2
    assert report is None


def test_misplaced_s_grid_in_config_file(cli_report, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"mean": {"family": "arithmetic"}, "s_grid": [1.0]}))
    code, _ = cli_report("hardy-constant", "--config", str(config), "-n", "1000")
    assert code == 2


def test_numerical_fault_exits_with_3(cli_report, monkeypatch):
    def fault(config):
        raise NumericalFault("accumulator produced NaN")

    monkeypatch.setitem(cli_main.HANDLERS, Command.EVAL, fault)
    code, report = cli_report("eval", "-m", "min", "--vector", "1")
    assert code == 3
    assert report is None


@pytest.mark.parametrize(
    "seq, command",
    [("geometric:0.5", "test-weak-hardy"), ("geometric:2", "hardy-ratio")],
    ids=["underflow", "overflow"],
)
def test_geometric_past_the_float_range_exits_with_3(cli_report, seq, command):
    code, report = cli_report(command, "-m", "min", "-s", seq, "-n", "5000")
    assert code == 3
    assert report is None


def test_refusal_is_not_an_error(cli_report):
    code, report = cli_report(
        "counterexample", "-m", "min", "-s", "harmonic", "-n", "1000", "--trials", "20"
    )
    assert code == 0
    assert report["result"]["status"] == "refused"


def test_config_round_trip_reproduces_the_report(runner, tmp_path):
    out = tmp_path / "first.json"
    result = runner.invoke(
        app,
        [
            "test-weak-hardy",
            "-m",
            "arithmetic",
            "-s",
            "harmonic",
            "-n",
            "5000",
            "--s-grid",
            "0.5,2",
            "--trials",
            "50",
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0
    first = out.read_bytes()
    config = tmp_path / "config.json"
    config.write_text(json.dumps(json.loads(first)["config"]))
    out.unlink()

    result = runner.invoke(app, ["test-weak-hardy", "--config", str(config)])
    assert result.exit_code == 0
    assert out.read_bytes() == first


def test_flags_override_the_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"mean": {"family": "min"}, "N": 500, "seed": 3}))
    config = resolve_config(Command.HARDY_CONSTANT, path, {"N": 2000, "seed": None})
    assert config.N == 2000
    assert config.seed == 3
    assert config.tol == 1e-3


def test_config_rejects_unknown_keys():
    with pytest.raises(ValueError):
        RunConfig.model_validate(
            {"command": "eval", "mean": {"family": "min"}, "vector": [1], "colour": 1}
        )


def test_csv_output(tmp_path, runner):
    out = tmp_path / "c.csv"
    result = runner.invoke(
        app,
        [
            "ratios",
            "-m",
            "arithmetic",
            "-s",
            "harmonic",
            "-n",
            "10",
            "-o",
            "csv",
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,value"
    assert len(lines) == 11
    assert lines[3].startswith("3,1.83333")


def test_table_output(runner, tmp_path):
    out = tmp_path / "report.txt"
    args = ["eval", "-m", "geometric", "--vector", "1,4", "-o", "table"]
    result = runner.invoke(app, [*args, "--out", str(out)])
    assert result.exit_code == 0
    text = out.read_text()
    assert "hardylab eval" in text
    assert "value" in text


def test_report_goes_to_stdout_without_out(runner):
    result = runner.invoke(app, ["eval", "-m", "max", "--vector", "1,4"])
    assert result.exit_code == 0
    start = result.stdout.index("{")
    assert json.loads(result.stdout[start:])["result"]["value"] == 4.0
