"""Mean families: declarative specs, batch and streaming evaluation, axiom checks"""

from hardylab.means.accumulators import MeanAccumulator, accumulator_for, prefix_means
from hardylab.means.axioms import AXIOMS, AxiomVerdict, PropertyReport, check_axioms
from hardylab.means.main import (
    MeanFamily,
    MeanSpec,
    PositiveVector,
    eval_mean,
    invert_generator,
    mean_from_text,
)

__version__ = "1.0.0"

__all__ = [
    "AXIOMS",
    "AxiomVerdict",
    "MeanAccumulator",
    "MeanFamily",
    "MeanSpec",
    "PositiveVector",
    "PropertyReport",
    "accumulator_for",
    "check_axioms",
    "eval_mean",
    "invert_generator",
    "mean_from_text",
    "prefix_means",
]
