"""
Numerical defaults and environment configuration.

Environment variables are read after loading an optional ``.env`` file from the
working directory, so a checked-in ``.env.example`` can be copied and edited.
"""

import os
from dataclasses import dataclass
from typing import List, Optional, Union

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

CHECKPOINTS_ENV = "HARDYLAB_CHECKPOINTS"
LOG_LEVEL_ENV = "HARDYLAB_LOG_LEVEL"


@dataclass(frozen=True)
class Settings:
    """Tolerances and limits shared by the analysis modules."""

    stream_rtol: float = 1e-12
    axiom_rtol: float = 1e-9
    generator_domain: tuple = (1e-9, 1e9)
    monotone_samples: int = 64
    bisection_tol: float = 1e-13
    bisection_max_iter: int = 200
    case_threshold: float = 1e-9
    certificate_slack: float = 1e-12
    identity_rtol: float = 1e-12
    checkpoint_start: int = 1000
    checkpoint_step: float = 0.5


SETTINGS = Settings()


def checkpoint_spec() -> Union[float, List[int]]:
    """
    Checkpoint spacing for the Hardy-constant estimator.

    ``HARDYLAB_CHECKPOINTS`` holds either a step in decades (``"0.25"``) or an
    explicit comma-separated list of indices (``"1000,5000,20000"``).
    """
    raw = os.getenv(CHECKPOINTS_ENV, "").strip()
    if not raw:
        return SETTINGS.checkpoint_step
    if "," in raw:
        try:
            points = sorted({int(part) for part in raw.split(",") if part.strip()})
        except ValueError:
            raise ValueError(f"{CHECKPOINTS_ENV} must be a float or a list of integers")
        if not points or points[0] < 1:
            raise ValueError(f"{CHECKPOINTS_ENV} indices must be positive")
        return points
    try:
        step = float(raw)
    except ValueError:
        raise ValueError(f"{CHECKPOINTS_ENV} must be a float or a list of integers")
    if step <= 0:
        raise ValueError(f"{CHECKPOINTS_ENV} step must be positive, got {step}")
    return step


def default_log_level() -> Optional[str]:
    level = os.getenv(LOG_LEVEL_ENV)
    return level.upper() if level else None
