"""
Run configuration and report rendering for the command-line front end.

Every report is an envelope ``{"tool", "version", "command", "config", "result"}``;
``config`` is the fully resolved ``RunConfig`` and can be fed back through
``--config`` to reproduce the report.
"""

import io
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, model_validator
from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from hardylab import __version__
from hardylab.hardy_analysis import SeqSpec
from hardylab.means import MeanSpec

TOOL = "hardylab"


class Command(str, Enum):
    EVAL = "eval"
    AXIOMS = "axioms"
    HARDY_CONSTANT = "hardy-constant"
    HARDY_RATIO = "hardy-ratio"
    RATIOS = "ratios"
    TEST_HARDY = "test-hardy"
    TEST_WEAK_HARDY = "test-weak-hardy"
    LEMMA1 = "lemma1"
    COUNTEREXAMPLE = "counterexample"
    EQUIVALENCE = "equivalence"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    TABLE = "table"


NEEDS_SEQ = {
    Command.HARDY_RATIO,
    Command.RATIOS,
    Command.TEST_HARDY,
    Command.TEST_WEAK_HARDY,
    Command.LEMMA1,
    Command.COUNTEREXAMPLE,
}
CSV_COMMANDS = {
    Command.EVAL,
    Command.HARDY_CONSTANT,
    Command.HARDY_RATIO,
    Command.RATIOS,
    Command.LEMMA1,
    Command.COUNTEREXAMPLE,
}


class RunConfig(BaseModel):
    """Resolved configuration of one run: defaults < config file < flags."""

    model_config = ConfigDict(extra="forbid")

    command: Command
    mean: Optional[MeanSpec] = None
    seq: Optional[SeqSpec] = None
    vector: Optional[List[float]] = None
    N: int = 100_000
    tol: float = 1e-3
    s_grid: Optional[List[float]] = None
    seed: int = 42
    trials: int = 1000
    window: Optional[int] = None
    log_c: Optional[float] = None
    log_d: Optional[float] = None
    n0: Optional[int] = None
    output: OutputFormat = OutputFormat.JSON
    out_path: Optional[str] = None

    @model_validator(mode="after")
    def _check_combination(self) -> "RunConfig":
        command = self.command
        if self.mean is None:
            raise ValueError(f"{command.value} needs --mean")
        if command in NEEDS_SEQ and self.seq is None:
            raise ValueError(f"{command.value} needs --seq")
        if command is Command.EVAL and not self.vector:
            raise ValueError("eval needs --vector")
        if self.vector is not None and command is not Command.EVAL:
            raise ValueError("--vector only applies to eval")
        if self.s_grid is not None and command is not Command.TEST_WEAK_HARDY:
            raise ValueError("--s-grid only applies to test-weak-hardy")
        growth = (self.log_c, self.log_d, self.n0)
        if any(value is not None for value in growth):
            if command is not Command.TEST_WEAK_HARDY:
                raise ValueError("--log-c/--log-d/--n0 only apply to test-weak-hardy")
            if any(value is None for value in growth):
                raise ValueError("--log-c, --log-d and --n0 must be given together")
        if self.output is OutputFormat.CSV and command not in CSV_COMMANDS:
            raise ValueError(f"csv output is not available for {command.value}")
        if self.N < 1:
            raise ValueError(f"N must be positive, got {self.N}")
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        return self


def resolve_config(
    command: Command, config_path: Optional[Path], overrides: Dict[str, Any]
) -> RunConfig:
    """Merge a JSON config file with the flags that were actually given."""
    data: Dict[str, Any] = {}
    if config_path is not None:
        data = json.loads(Path(config_path).read_text())
        if not isinstance(data, dict):
            raise ValueError(f"config file {config_path} must hold a JSON object")
    data.update({key: value for key, value in overrides.items() if value is not None})
    data["command"] = command
    return RunConfig.model_validate(data)


def _finite(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(item) for item in value]
    return value


def envelope(config: RunConfig, result: dict) -> dict:
    return {
        "tool": TOOL,
        "version": __version__,
        "command": config.command.value,
        "config": config.model_dump(mode="json"),
        "result": _finite(result),
    }


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _rows(prefix: str, value, rows: list) -> None:
    if isinstance(value, dict):
        for key, item in value.items():
            _rows(f"{prefix}.{key}" if prefix else str(key), item, rows)
    elif isinstance(value, list):
        if len(value) <= 8 and all(not isinstance(x, (dict, list)) for x in value):
            rows.append((prefix, ", ".join(_cell(x) for x in value)))
        else:
            rows.append((prefix, f"[{len(value)} items]"))
    else:
        rows.append((prefix, _cell(value)))


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return "-" if value is None else str(value)


def render_table(report: dict, width: int = 100) -> str:
    """Human summary of a report: a panel naming the run and a key/value table."""
    buffer = io.StringIO()
    out = Console(file=buffer, width=width, force_terminal=False)
    config = report["config"]
    title = f"hardylab {report['command']}"
    subtitle = json.dumps(config.get("mean"))
    if config.get("seq"):
        subtitle += f" on {json.dumps(config['seq'])}"
    out.print(Panel(Text(subtitle), title=title, border_style="blue"))
    table = Table(box=box.SIMPLE, show_header=True, header_style="bold magenta")
    table.add_column("Field", style="cyan", no_wrap=True)
    table.add_column("Value")
    rows: list = []
    _rows("", report["result"], rows)
    for key, value in rows:
        table.add_row(Text(key), Text(value))
    out.print(table)
    return buffer.getvalue()
