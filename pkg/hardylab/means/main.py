#!/usr/bin/env python3
"""
Mean Families

Declarative mean specifications, batch evaluation on positive vectors and
streaming evaluation over sequence prefixes.
"""

import json
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from hardylab.config import SETTINGS
from hardylab.errors import ExprDomainError, MeanDomainError
from hardylab.genparse import (
    ExprHandle,
    check_monotone,
    invert_monotone,
    parse_generator,
)

logger = logging.getLogger(__name__)


class MeanFamily(str, Enum):
    POWER = "power"
    GEOMETRIC = "geometric"
    ARITHMETIC = "arithmetic"
    HARMONIC = "harmonic"
    MIN = "min"
    MAX = "max"
    QUASIARITHMETIC = "quasiarithmetic"


class MeanSpec(BaseModel):
    """
    Declarative description of a mean.

    Serialises to ``{"family": "power", "p": 0.5}`` or
    ``{"family": "quasiarithmetic", "generator": "log(x)"}``; the quasiarithmetic
    generator is checked for strict monotonicity on ``domain`` at construction.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: MeanFamily
    p: Optional[float] = None
    generator: Optional[str] = None
    domain: Optional[Tuple[float, float]] = None
    label: Optional[str] = None

    @model_validator(mode="after")
    def _check_parameters(self) -> "MeanSpec":
        if self.family is MeanFamily.POWER:
            if self.p is None or not math.isfinite(self.p):
                raise ValueError("power mean needs a finite exponent 'p'")
        elif self.p is not None:
            raise ValueError(f"'p' is not a parameter of {self.family.value} means")
        if self.family is not MeanFamily.QUASIARITHMETIC:
            if self.generator is not None or self.domain is not None:
                raise ValueError("'generator' and 'domain' need a quasiarithmetic mean")
            return self
        if not self.generator:
            raise ValueError("quasiarithmetic mean needs a 'generator' expression")
        lo, hi = self.working_domain
        if not (0 < lo < hi):
            raise ValueError(f"generator domain needs 0 < lo < hi, got {self.domain}")
        check_monotone(parse_generator(self.generator), lo, hi, log_spaced=True)
        return self

    @property
    def working_domain(self) -> Tuple[float, float]:
        return tuple(self.domain) if self.domain else SETTINGS.generator_domain

    @cached_property
    def expr(self) -> Optional[ExprHandle]:
        if self.generator is None:
            return None
        return parse_generator(self.generator)

    @property
    def display_label(self) -> str:
        if self.label:
            return self.label
        if self.family is MeanFamily.POWER:
            return f"power(p={self.p:g})"
        if self.family is MeanFamily.QUASIARITHMETIC:
            return f"quasiarithmetic({self.generator})"
        return self.family.value

    def to_json(self) -> dict:
        return self.model_dump(mode="json", exclude_none=True)

    @classmethod
    def power(cls, p: float) -> "MeanSpec":
        return cls(family=MeanFamily.POWER, p=p)

    @classmethod
    def quasiarithmetic(cls, generator: str, domain=None) -> "MeanSpec":
        return cls(
            family=MeanFamily.QUASIARITHMETIC, generator=generator, domain=domain
        )

    @classmethod
    def of(cls, family: Union[str, MeanFamily]) -> "MeanSpec":
        return cls(family=MeanFamily(family))


def mean_from_text(text: str) -> MeanSpec:
    """
    Parse the command-line shorthand for a mean.

    Accepts ``power:0.5``, ``geometric``, ``arithmetic``, ``harmonic``, ``min``,
    ``max``, ``quasiarithmetic:log(x)`` and ``file:PATH`` (a MeanSpec JSON file).
    """
    name, _, param = text.partition(":")
    name = name.strip().lower()
    if name == "file":
        return MeanSpec.model_validate(json.loads(Path(param).read_text()))
    if name == "power":
        if not param:
            raise ValueError("power mean needs an exponent, e.g. power:0.5")
        return MeanSpec.power(float(param))
    if name in ("quasiarithmetic", "qa"):
        return MeanSpec.quasiarithmetic(param)
    if param:
        raise ValueError(f"mean family {name!r} takes no parameter")
    try:
        family = MeanFamily(name)
    except ValueError:
        known = ", ".join(member.value for member in MeanFamily)
        raise ValueError(f"unknown mean family {name!r} (known: {known})")
    return MeanSpec(family=family)


@dataclass(frozen=True)
class PositiveVector:
    """Nonempty tuple of positive finite reals."""

    entries: Tuple[float, ...]

    def __post_init__(self):
        entries = tuple(float(value) for value in self.entries)
        if not entries:
            raise MeanDomainError("mean of an empty vector is undefined")
        for index, value in enumerate(entries):
            if not (value > 0 and math.isfinite(value)):
                raise MeanDomainError(
                    f"entry {index} = {value!r} is not a positive finite number"
                )
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def _as_vector(v: Union[PositiveVector, Iterable[float]]) -> PositiveVector:
    return v if isinstance(v, PositiveVector) else PositiveVector(tuple(v))


def _log_power_mean(values: Sequence[float], p: float) -> float:
    logs = [p * math.log(value) for value in values]
    top = max(logs)
    scaled = math.fsum(math.exp(entry - top) for entry in logs)
    return math.exp((top + math.log(scaled / len(values))) / p)


def _quasiarithmetic(spec: MeanSpec, values: Sequence[float]) -> float:
    lo, hi = spec.working_domain
    if min(values) < lo or max(values) > hi:
        raise MeanDomainError(
            f"entries span [{min(values)!r}, {max(values)!r}] outside the generator "
            f"domain [{lo!r}, {hi!r}]"
        )
    average = math.fsum(spec.expr(value) for value in values) / len(values)
    return invert_generator(spec.expr, average, min(values), max(values))


def invert_generator(expr: ExprHandle, y: float, lo: float, hi: float) -> float:
    """Apply the generator inverse, bracketed by the entries' range."""
    if lo == hi:
        return lo
    inverse = expr.inverse
    if inverse is not None:
        try:
            return inverse(y)
        except (ValueError, OverflowError):
            raise ExprDomainError(f"cannot invert {expr} at {y!r}")
    # the image of [lo, hi] contains y up to rounding of the average
    f_lo, f_hi = expr(lo), expr(hi)
    y = min(max(y, min(f_lo, f_hi)), max(f_lo, f_hi))
    return invert_monotone(expr, y, lo, hi, check=False)


def eval_mean(spec: MeanSpec, v: Union[PositiveVector, Iterable[float]]) -> float:
    """
    Evaluate a mean on a positive vector.

    The result is clamped into [min(v), max(v)], so the mean-value property holds
    exactly and not only up to rounding.

    Raises:
        MeanDomainError: empty vector, nonpositive entry, or entry outside the
            quasiarithmetic generator domain
    """
    values = _as_vector(v).entries
    n = len(values)
    family = spec.family
    if family is MeanFamily.ARITHMETIC:
        result = math.fsum(values) / n
    elif family is MeanFamily.GEOMETRIC or (family is MeanFamily.POWER and not spec.p):
        result = math.exp(math.fsum(math.log(value) for value in values) / n)
    elif family is MeanFamily.HARMONIC:
        result = n / math.fsum(1.0 / value for value in values)
    elif family is MeanFamily.MIN:
        return min(values)
    elif family is MeanFamily.MAX:
        return max(values)
    elif family is MeanFamily.POWER:
        result = _log_power_mean(values, spec.p)
    else:
        result = _quasiarithmetic(spec, values)
    return min(max(result, min(values)), max(values))

