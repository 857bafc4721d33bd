"""
Positive sequence rules.

A ``SeqSpec`` generates the terms a_1, a_2, ... of a positive sequence and knows,
for the closed-form rules, whether the series diverges and whether the infimum of
the terms is zero. Explicit lists and custom expressions carry no such knowledge;
callers fall back to numerical heuristics for them.
"""

import json
import logging
import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, model_validator

from hardylab.errors import ExprDomainError, NumericalFault, SequenceError
from hardylab.genparse import ExprHandle, parse_generator
from hardylab.summation import running_sums

logger = logging.getLogger(__name__)


class SeqRule(str, Enum):
    HARMONIC = "harmonic"
    POWER_LAW = "power_law"
    CONSTANT = "constant"
    GEOMETRIC = "geometric"
    EXPLICIT = "explicit"
    CUSTOM = "custom"


_PARAMETERS = {
    SeqRule.HARMONIC: set(),
    SeqRule.POWER_LAW: {"alpha"},
    SeqRule.CONSTANT: {"value"},
    SeqRule.GEOMETRIC: {"q"},
    SeqRule.EXPLICIT: {"values"},
    SeqRule.CUSTOM: {"expr"},
}


class SeqSpec(BaseModel):
    """
    Declarative positive sequence.

    JSON forms: ``{"rule": "harmonic"}``, ``{"rule": "power_law", "alpha": 0.5}``,
    ``{"rule": "constant", "value": 1}``, ``{"rule": "geometric", "q": 0.5}``,
    ``{"rule": "explicit", "values": [...]}`` and
    ``{"rule": "custom", "expr": "1/n^2"}``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    rule: SeqRule
    alpha: Optional[float] = None
    value: Optional[float] = None
    q: Optional[float] = None
    values: Optional[List[float]] = None
    expr: Optional[str] = None
    label: Optional[str] = None

    @model_validator(mode="after")
    def _check_parameters(self) -> "SeqSpec":
        given = {
            name
            for name in ("alpha", "value", "q", "values", "expr")
            if getattr(self, name) is not None
        }
        required = _PARAMETERS[self.rule]
        if given != required:
            need = ", ".join(sorted(required)) or "no parameters"
            raise ValueError(f"{self.rule.value} sequence takes {need}")
        if self.rule is SeqRule.POWER_LAW and not math.isfinite(self.alpha):
            raise ValueError("power_law exponent must be finite")
        if self.rule is SeqRule.CONSTANT and not (0 < self.value < math.inf):
            raise ValueError(f"constant value must be positive, got {self.value}")
        if self.rule is SeqRule.GEOMETRIC and not (0 < self.q < math.inf):
            raise ValueError(f"geometric ratio must be positive, got {self.q}")
        if self.rule is SeqRule.EXPLICIT:
            if not self.values:
                raise ValueError("explicit sequence needs at least one value")
            for index, term in enumerate(self.values, start=1):
                if not (term > 0 and math.isfinite(term)):
                    raise ValueError(f"explicit term {index} is not positive: {term!r}")
        if self.rule is SeqRule.CUSTOM:
            parse_generator(self.expr, variable="n")
        return self

    @cached_property
    def compiled(self) -> Optional[ExprHandle]:
        if self.rule is not SeqRule.CUSTOM:
            return None
        return parse_generator(self.expr, variable="n")

    @property
    def display_label(self) -> str:
        if self.label:
            return self.label
        if self.rule is SeqRule.POWER_LAW:
            return f"n^(-{self.alpha:g})"
        if self.rule is SeqRule.CONSTANT:
            return f"constant({self.value:g})"
        if self.rule is SeqRule.GEOMETRIC:
            return f"{self.q:g}^n"
        if self.rule is SeqRule.EXPLICIT:
            return f"explicit[{len(self.values)}]"
        if self.rule is SeqRule.CUSTOM:
            return self.expr
        return "1/n"

    def to_json(self) -> dict:
        return self.model_dump(mode="json", exclude_none=True)

    def _raw(self, n: int) -> float:
        rule = self.rule
        if rule is SeqRule.HARMONIC:
            return 1.0 / n
        if rule is SeqRule.POWER_LAW:
            return float(n) ** -self.alpha
        if rule is SeqRule.CONSTANT:
            return self.value
        if rule is SeqRule.GEOMETRIC:
            return self.q**n
        if rule is SeqRule.EXPLICIT:
            if n > len(self.values):
                raise SequenceError(
                    f"explicit sequence has {len(self.values)} terms, "
                    f"term {n} requested"
                )
            return self.values[n - 1]
        try:
            return self.compiled(float(n))
        except ExprDomainError as e:
            raise SequenceError(f"term {n} of {self.expr!r} is undefined: {e}")

    @cached_property
    def float_limit(self) -> Optional[int]:
        """
        Largest n whose geometric term q^n is a normal float64.

        None for every other rule and for q = 1. With q = 1/2 the limit is 1022,
        since 2^-1022 is the smallest normal double.
        """
        if self.rule is not SeqRule.GEOMETRIC or self.q == 1:
            return None
        bound = sys.float_info.min if self.q < 1 else sys.float_info.max
        limit = max(1, int(math.log(bound) / math.log(self.q)))
        while _is_normal(self.q, limit + 1):
            limit += 1
        while limit > 0 and not _is_normal(self.q, limit):
            limit -= 1
        return limit

    def _check_limit(self, n: int) -> None:
        limit = self.float_limit
        if limit is not None and n > limit:
            raise NumericalFault(
                f"{self.display_label} leaves the normal float64 range after "
                f"term {limit}; {n} terms requested"
            )

    def term(self, n: int) -> float:
        """
        The n-th term (1-based).

        Raises:
            SequenceError: for an index below 1 or a term that is negative,
                undefined or past the end of an explicit list
            NumericalFault: for a term that overflows or underflows float64
        """
        if n < 1:
            raise SequenceError(f"sequence index must be >= 1, got {n}")
        self._check_limit(n)
        try:
            value = self._raw(n)
        except OverflowError:
            raise NumericalFault(f"term {n} of {self.display_label} overflows")
        if value == 0.0 or value == math.inf:
            raise NumericalFault(
                f"term {n} of {self.display_label} is {value!r} in float64"
            )
        if not (value > 0 and math.isfinite(value)):
            raise SequenceError(
                f"term {n} of {self.display_label} is {value!r}, not a positive finite "
                "number"
            )
        return value

    def terms(self, N: int) -> List[float]:
        """The prefix a_1, ..., a_N."""
        if N < 1:
            raise SequenceError(f"prefix length must be >= 1, got {N}")
        if self.rule is SeqRule.EXPLICIT and N > len(self.values):
            raise SequenceError(
                f"explicit sequence has {len(self.values)} terms, {N} requested"
            )
        self._check_limit(N)
        return [self.term(n) for n in range(1, N + 1)]

    def sum_diverges(self) -> Optional[bool]:
        """Analytic divergence of the series; None when unknown."""
        rule = self.rule
        if rule in (SeqRule.HARMONIC, SeqRule.CONSTANT):
            return True
        if rule is SeqRule.POWER_LAW:
            return self.alpha <= 1
        if rule is SeqRule.GEOMETRIC:
            return self.q >= 1
        return None

    def infimum_is_zero(self) -> Optional[bool]:
        """Whether inf a_n = 0 over all n; None when unknown."""
        rule = self.rule
        if rule is SeqRule.HARMONIC:
            return True
        if rule is SeqRule.POWER_LAW:
            return self.alpha > 0
        if rule is SeqRule.GEOMETRIC:
            return self.q < 1
        if rule is SeqRule.CONSTANT:
            return False
        return None

    def is_decreasing(self) -> Optional[bool]:
        """Whether the terms strictly decrease; None when unknown."""
        rule = self.rule
        if rule is SeqRule.HARMONIC:
            return True
        if rule is SeqRule.POWER_LAW:
            return self.alpha > 0
        if rule is SeqRule.GEOMETRIC:
            return self.q < 1
        if rule is SeqRule.CONSTANT:
            return False
        return None

    @classmethod
    def harmonic(cls) -> "SeqSpec":
        return cls(rule=SeqRule.HARMONIC)

    @classmethod
    def power_law(cls, alpha: float) -> "SeqSpec":
        return cls(rule=SeqRule.POWER_LAW, alpha=alpha)

    @classmethod
    def constant(cls, value: float) -> "SeqSpec":
        return cls(rule=SeqRule.CONSTANT, value=value)

    @classmethod
    def geometric(cls, q: float) -> "SeqSpec":
        return cls(rule=SeqRule.GEOMETRIC, q=q)

    @classmethod
    def explicit(cls, values: Sequence[float]) -> "SeqSpec":
        return cls(rule=SeqRule.EXPLICIT, values=list(values))

    @classmethod
    def custom(cls, expr: str) -> "SeqSpec":
        return cls(rule=SeqRule.CUSTOM, expr=expr)


def _is_normal(q: float, n: int) -> bool:
    try:
        value = q**n
    except OverflowError:
        return False
    return sys.float_info.min <= value <= sys.float_info.max


def _number(text: str) -> float:
    # accepts "0.5", "1e-3" and "1/2"
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a number: {text!r}")


def seq_from_text(text: str) -> SeqSpec:
    """
    Parse the command-line shorthand for a sequence.

    Accepts ``harmonic``, ``powerlaw:0.5``, ``constant:1``, ``geometric:1/2``,
    ``explicit:1;0.5;0.25``, ``custom:1/n^2`` and ``file:PATH`` (SeqSpec JSON).
    """
    name, _, param = text.partition(":")
    name = name.strip().lower().replace("-", "_")
    if name == "file":
        return SeqSpec.model_validate(json.loads(Path(param).read_text()))
    if name == "harmonic":
        if param:
            raise ValueError("harmonic sequence takes no parameter")
        return SeqSpec.harmonic()
    if not param:
        raise ValueError(f"sequence rule {name!r} needs a parameter, e.g. {name}:0.5")
    if name in ("powerlaw", "power_law"):
        return SeqSpec.power_law(_number(param))
    if name == "constant":
        return SeqSpec.constant(_number(param))
    if name == "geometric":
        return SeqSpec.geometric(_number(param))
    if name == "explicit":
        parts = param.replace(",", ";").split(";")
        return SeqSpec.explicit([_number(part) for part in parts if part.strip()])
    if name == "custom":
        return SeqSpec.custom(param)
    known = "harmonic, powerlaw, constant, geometric, explicit, custom, file"
    raise ValueError(f"unknown sequence rule {name!r} (known: {known})")


@dataclass
class SeriesBuffer:
    """Materialized prefix of a series with its compensated partial sums."""

    terms: List[float]
    partial_sums: List[float] = field(default_factory=list)

    def __post_init__(self):
        if not self.partial_sums:
            self.partial_sums = running_sums(self.terms)

    @property
    def N(self) -> int:
        return len(self.terms)

    @property
    def total(self) -> float:
        return self.partial_sums[-1] if self.partial_sums else 0.0

    def block_sum(self, start: int, stop: int) -> float:
        """Sum of the terms with 1-based index in (start, stop]."""
        if stop <= start:
            return 0.0
        return math.fsum(self.terms[start:stop])

    @classmethod
    def of(cls, a, N: int) -> "SeriesBuffer":
        values = a.terms(N) if hasattr(a, "terms") else [float(x) for x in list(a)[:N]]
        if len(values) < N:
            raise SequenceError(f"sequence has only {len(values)} terms, {N} requested")
        return cls(terms=values)
