"""Command-line front end"""

from hardylab.cli.reports import (
    Command,
    OutputFormat,
    RunConfig,
    envelope,
    resolve_config,
)

__version__ = "1.0.0"

__all__ = ["Command", "OutputFormat", "RunConfig", "envelope", "resolve_config"]
