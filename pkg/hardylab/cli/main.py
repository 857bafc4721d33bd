#!/usr/bin/env python3
"""
hardylab command line

Each command resolves a RunConfig (defaults < --config file < flags), runs one
analysis and writes a JSON, CSV or table report to stdout or --out. Diagnostics
go to stderr.

Exit codes: 0 for a completed analysis (refusals and failing tests included),
2 for usage, parse and validation errors, 3 for numerical faults.
"""

import logging
from pathlib import Path
from typing import Annotated, Callable, Dict, List, Optional, Tuple

import typer
from pydantic import ValidationError

from hardylab.cli.reports import (
    Command,
    OutputFormat,
    RunConfig,
    envelope,
    render_json,
    render_table,
    resolve_config,
)
from hardylab.csvio import atomic_write, render_csv
from hardylab.errors import HardyLabError, NumericalFault
from hardylab.hardy_analysis import (
    EstimateVerdict,
    SeqSpec,
    hardy_constant_estimate,
    hardy_divergence_test,
    hardy_ratio,
    nearly_increasing_epsilon,
    prefix_ratios,
    seq_from_text,
    weak_hardy_test,
)
from hardylab.lemma1 import build_partition, counterexample, emit_r
from hardylab.log import console, setup_logging
from hardylab.means import check_axioms, eval_mean, mean_from_text

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="hardylab",
    help="Numerical laboratory for multivariable means and Hardy-type inequalities",
    add_completion=False,
    rich_markup_mode="rich",
)

DEFAULT_S_GRID = [0.5, 1.0, 2.0]


def _floats(text: Optional[str]) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"expected comma-separated numbers: {text!r}")


# Shared options
MeanOpt = Annotated[
    Optional[str],
    typer.Option("--mean", "-m", help="power:P, geometric, arithmetic, harmonic, min, "
                 "max, quasiarithmetic:EXPR or file:PATH"),
]
SeqOpt = Annotated[
    Optional[str],
    typer.Option("--seq", "-s", help="harmonic, powerlaw:A, constant:V, geometric:Q, "
                 "explicit:V1;V2;..., custom:EXPR-in-n or file:PATH"),
]
NOpt = Annotated[Optional[int], typer.Option("--n", "-n", help="Number of terms")]
TolOpt = Annotated[
    Optional[float], typer.Option("--tol", help="Relative drift tolerance")
]
SeedOpt = Annotated[Optional[int], typer.Option("--seed", help="Sampling seed")]
TrialsOpt = Annotated[
    Optional[int], typer.Option("--trials", help="Axiom sampling trials")
]
WindowOpt = Annotated[
    Optional[int],
    typer.Option("--window", help="Trailing window length (default N/10)"),
]
ConfigOpt = Annotated[
    Optional[Path], typer.Option("--config", "-c", help="JSON run configuration")
]
OutputOpt = Annotated[
    Optional[OutputFormat], typer.Option("--output", "-o", help="json, csv or table")
]
OutOpt = Annotated[Optional[Path], typer.Option("--out", help="Write the report here")]
VerboseOpt = Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging")]


# --------------------------------------------------------------------------
# Command bodies: RunConfig -> (JSON result, CSV text or None)
# --------------------------------------------------------------------------


def _eval(config: RunConfig) -> Tuple[dict, Optional[str]]:
    value = eval_mean(config.mean, config.vector)
    return {"value": value}, render_csv(("value",), [(value,)])


def _axioms(config: RunConfig) -> Tuple[dict, Optional[str]]:
    report = check_axioms(config.mean, trials=config.trials, seed=config.seed)
    return {**report.model_dump(mode="json"), "passed": report.passed}, None


def _hardy_constant(config: RunConfig) -> Tuple[dict, Optional[str]]:
    estimate = hardy_constant_estimate(config.mean, config.N, config.tol)
    rows = ((point.n, point.value) for point in estimate.trajectory)
    return estimate.model_dump(mode="json"), render_csv(("n", "value"), rows)


def _hardy_ratio(config: RunConfig) -> Tuple[dict, Optional[str]]:
    result = hardy_ratio(config.mean, config.seq, config.N)
    rows = zip(
        range(1, result.N + 1),
        result.numerator_partial_sums,
        result.denominator_partial_sums,
    )
    return result.to_json(), render_csv(("n", "numerator", "denominator"), rows)


def _ratios(config: RunConfig) -> Tuple[dict, Optional[str]]:
    _, _, c = prefix_ratios(config.mean, config.seq, config.N)
    eps, pair = nearly_increasing_epsilon(c)
    result = {
        "N": config.N,
        "c_1": c[0],
        "c_N": c[-1],
        "min": min(c),
        "max": max(c),
        "nearly_increasing_epsilon": eps,
        "argmin": list(pair),
    }
    return result, render_csv(("n", "value"), enumerate(c, start=1))


def _test_hardy(config: RunConfig) -> Tuple[dict, Optional[str]]:
    verdict = hardy_divergence_test(config.mean, config.seq, config.N, config.window)
    return verdict.model_dump(mode="json"), None


def _test_weak_hardy(config: RunConfig) -> Tuple[dict, Optional[str]]:
    growth = None
    if config.log_c is not None:
        growth = (config.log_c, config.log_d, config.n0)
    report = weak_hardy_test(
        config.mean,
        config.seq,
        config.N,
        s_grid=config.s_grid or DEFAULT_S_GRID,
        window=config.window,
        trials=config.trials,
        seed=config.seed,
        log_growth=growth,
    )
    return report.model_dump(mode="json"), None


def _lemma1(config: RunConfig) -> Tuple[dict, Optional[str]]:
    terms, _, c = prefix_ratios(config.mean, config.seq, config.N)
    partition, heuristic = build_partition(config.seq, terms, c, config.N)
    r = emit_r(partition, strictify=True, N=config.N)
    result = {
        "partition": partition.model_dump(mode="json"),
        "case_heuristic": heuristic,
        "horizon": r.horizon,
        "r_first": r.values[0],
        "r_last": r.values[-1],
        "r_strictly_decreasing": r.strictly_decreasing(),
    }
    return result, partition.to_csv()


def _counterexample(config: RunConfig) -> Tuple[dict, Optional[str]]:
    report = counterexample(
        config.mean,
        config.seq,
        config.N,
        window=config.window,
        trials=config.trials,
        seed=config.seed,
    )
    csv_text = report.series.to_csv() if report.series is not None else render_csv(
        ("n", "b_n", "sum_b", "mean_sum", "certificate"), []
    )
    return report.model_dump(mode="json"), csv_text


def _equivalence(config: RunConfig) -> Tuple[dict, Optional[str]]:
    seq = config.seq or SeqSpec.harmonic()
    axioms = check_axioms(config.mean, trials=config.trials, seed=config.seed)
    estimate = hardy_constant_estimate(config.mean, config.N, config.tol)
    report = counterexample(
        config.mean,
        seq,
        config.N,
        window=config.window,
        trials=config.trials,
        seed=config.seed,
    )
    if estimate.verdict is EstimateVerdict.CONVERGED and report.status == "refused":
        dichotomy = "hardy"
    elif estimate.verdict is EstimateVerdict.DIVERGING and report.constructed:
        dichotomy = "not-weak-hardy"
    else:
        dichotomy = "inconclusive"
    result = {
        "dichotomy": dichotomy,
        "axioms": {name: v.passed for name, v in axioms.verdicts.items()},
        "estimate": {
            "final": estimate.final,
            "verdict": estimate.verdict.value,
            "drift": estimate.diagnostics["drift"],
        },
        "counterexample": {
            "status": report.status,
            "reasons": report.reasons,
            "horizon": report.horizon,
            "structural_bound": report.structural_bound,
        },
    }
    return result, None


HANDLERS: Dict[Command, Callable[[RunConfig], Tuple[dict, Optional[str]]]] = {
    Command.EVAL: _eval,
    Command.AXIOMS: _axioms,
    Command.HARDY_CONSTANT: _hardy_constant,
    Command.HARDY_RATIO: _hardy_ratio,
    Command.RATIOS: _ratios,
    Command.TEST_HARDY: _test_hardy,
    Command.TEST_WEAK_HARDY: _test_weak_hardy,
    Command.LEMMA1: _lemma1,
    Command.COUNTEREXAMPLE: _counterexample,
    Command.EQUIVALENCE: _equivalence,
}


def dispatch(config: RunConfig) -> str:
    """Run one configured analysis and render its report."""
    result, csv_text = HANDLERS[config.command](config)
    if config.output is OutputFormat.CSV:
        text = csv_text
    elif config.output is OutputFormat.TABLE:
        text = render_table(envelope(config, result))
    else:
        text = render_json(envelope(config, result))
    if config.out_path:
        atomic_write(config.out_path, text)
        logger.info("Report written to %s", config.out_path)
    else:
        typer.echo(text, nl=False)
    return text


def _fail(message: str, code: int) -> None:
    console.print(f"[bold red]Error:[/bold red] {message}", highlight=False)
    raise typer.Exit(code=code)


def _run(command: Command, config_path: Optional[Path], verbose: bool, **flags) -> None:
    setup_logging("DEBUG" if verbose else None)
    try:
        if flags.get("mean") is not None:
            flags["mean"] = mean_from_text(flags["mean"])
        if flags.get("seq") is not None:
            flags["seq"] = seq_from_text(flags["seq"])
        if flags.get("out_path") is not None:
            flags["out_path"] = str(flags["out_path"])
        config = resolve_config(command, config_path, flags)
    except (ValidationError, ValueError, OSError) as e:
        _fail(str(e), 2)
    try:
        dispatch(config)
    except NumericalFault as e:
        _fail(f"numerical fault: {e}", 3)
    except (ValidationError, ValueError, HardyLabError) as e:
        _fail(str(e), 2)


@app.command("eval")
def eval_command(
    mean: MeanOpt = None,
    vector: Annotated[
        Optional[str], typer.Option("--vector", help="Comma-separated positive entries")
    ] = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
):
    """Evaluate a mean on one vector."""
    _run(Command.EVAL, config, verbose, mean=mean, vector=_floats(vector),
         output=output, out_path=out)


@app.command("axioms")
def axioms_command(
    mean: MeanOpt = None,
    trials: TrialsOpt = None,
    seed: SeedOpt = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
):
    """Check the six mean axioms on seeded random vectors."""
    _run(Command.AXIOMS, config, verbose, mean=mean, trials=trials, seed=seed,
         output=output, out_path=out)


@app.command("hardy-constant")
def hardy_constant_command(
    mean: MeanOpt = None,
    n: NOpt = None,
    tol: TolOpt = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
):
    """Estimate the Hardy constant as the limit of n * M(1, 1/2, ..., 1/n)."""
    _run(Command.HARDY_CONSTANT, config, verbose, mean=mean, N=n, tol=tol,
         output=output, out_path=out)


@app.command("hardy-ratio")
def hardy_ratio_command(
    mean: MeanOpt = None,
    seq: SeqOpt = None,
    n: NOpt = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
):
    """Ratio of the sum of prefix means to the sum of terms."""
    _run(Command.HARDY_RATIO, config, verbose, mean=mean, seq=seq, N=n,
         output=output, out_path=out)


@app.command("ratios")
def ratios_command(
    mean: MeanOpt = None,
    seq: SeqOpt = None,
    n: NOpt = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
):
    """The ratio sequence c_n = M(a_1, ..., a_n) / a_n."""
    _run(Command.RATIOS, config, verbose, mean=mean, seq=seq, N=n,
         output=output, out_path=out)


@app.command("test-hardy")
def test_hardy_command(
    mean: MeanOpt = None,
    seq: SeqOpt = None,
    n: NOpt = None,
    window: WindowOpt = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
):
    """Divergent sum with unbounded ratio sequence: M is not a Hardy mean."""
    _run(Command.TEST_HARDY, config, verbose, mean=mean, seq=seq, N=n, window=window,
         output=output, out_path=out)


@app.command("test-weak-hardy")
def test_weak_hardy_command(
    mean: MeanOpt = None,
    seq: SeqOpt = None,
    n: NOpt = None,
    s_grid: Annotated[
        Optional[str], typer.Option("--s-grid", help="Comma-separated exponents s > 0")
    ] = None,
    window: WindowOpt = None,
    trials: TrialsOpt = None,
    seed: SeedOpt = None,
    log_c: Annotated[
        Optional[float], typer.Option("--log-c", help="Growth constant C")
    ] = None,
    log_d: Annotated[
        Optional[float], typer.Option("--log-d", help="Log exponent D")
    ] = None,
    n0: Annotated[
        Optional[int], typer.Option("--n0", help="First checked index")
    ] = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
):
    """All finite criteria showing that M is not a weak-Hardy mean."""
    _run(Command.TEST_WEAK_HARDY, config, verbose, mean=mean, seq=seq, N=n,
         s_grid=_floats(s_grid), window=window, trials=trials, seed=seed,
         log_c=log_c, log_d=log_d, n0=n0, output=output, out_path=out)


@app.command("lemma1")
def lemma1_command(
    mean: MeanOpt = None,
    seq: SeqOpt = None,
    n: NOpt = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
):
    """Block partition and strictified weights for the ratio sequence."""
    _run(Command.LEMMA1, config, verbose, mean=mean, seq=seq, N=n,
         output=output, out_path=out)


@app.command("counterexample")
def counterexample_command(
    mean: MeanOpt = None,
    seq: SeqOpt = None,
    n: NOpt = None,
    window: WindowOpt = None,
    trials: TrialsOpt = None,
    seed: SeedOpt = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
):
    """Construct a certified summable sequence with divergent prefix-mean sum."""
    _run(Command.COUNTEREXAMPLE, config, verbose, mean=mean, seq=seq, N=n,
         window=window, trials=trials, seed=seed, output=output, out_path=out)


@app.command("equivalence")
def equivalence_command(
    mean: MeanOpt = None,
    seq: SeqOpt = None,
    n: NOpt = None,
    tol: TolOpt = None,
    window: WindowOpt = None,
    trials: TrialsOpt = None,
    seed: SeedOpt = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out: OutOpt = None,
    verbose: VerboseOpt = False,
):
    """Hardy estimate against the counterexample pipeline: hardy or not weak-Hardy."""
    _run(Command.EQUIVALENCE, config, verbose, mean=mean, seq=seq, N=n, tol=tol,
         window=window, trials=trials, seed=seed, output=output, out_path=out)


if __name__ == "__main__":
    app()
