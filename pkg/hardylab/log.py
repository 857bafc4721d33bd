"""Console and logging setup shared by the command-line front end."""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from hardylab.config import default_log_level

# Initialize console (diagnostics only; reports go to stdout)
console = Console(stderr=True)


def setup_logging(level: Optional[str] = None) -> None:
    """Route every ``hardylab`` logger through a single rich handler."""
    resolved = level or default_log_level() or "WARNING"
    root = logging.getLogger("hardylab")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    root.addHandler(
        RichHandler(console=console, show_path=False, rich_tracebacks=True)
    )
    root.setLevel(resolved)
    root.propagate = False
