import json
import math
from pathlib import Path

import pytest
from typer.testing import CliRunner

from hardylab.hardy_analysis import SeqSpec
from hardylab.means import MeanSpec

ROOT = Path(__file__).resolve().parent.parent


def harmonic_number(n: int) -> float:
    return math.fsum(1.0 / k for k in range(1, n + 1))


@pytest.fixture
def harmonic_numbers():
    def build(N: int):
        return [harmonic_number(n) for n in range(1, N + 1)]

    return build


@pytest.fixture
def arithmetic():
    return MeanSpec.of("arithmetic")


@pytest.fixture
def geometric():
    return MeanSpec.of("geometric")


@pytest.fixture
def harmonic_seq():
    return SeqSpec.harmonic()


@pytest.fixture(scope="session")
def report_schema():
    return json.loads((ROOT / "schemas" / "report.schema.json").read_text())


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def cli_report(runner, tmp_path):
    """Run a command with --out and return (exit code, parsed report or None)."""
    from hardylab.cli.main import app

    def invoke(*args: str):
        out = tmp_path / "report.json"
        if out.exists():
            out.unlink()
        result = runner.invoke(app, [*args, "--out", str(out)])
        report = json.loads(out.read_text()) if out.exists() else None
        return result.exit_code, report

    return invoke
