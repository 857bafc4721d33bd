"""
Streaming mean accumulators.

Each accumulator keeps the family's sufficient statistic (compensated sums of
generator images, running extrema, log sums) so that the prefix means of a
10^6-term sequence cost one pass and agree with ``eval_mean`` on every prefix
to 1e-12 relative.
"""

import logging
import math
from typing import List

from hardylab.errors import MeanDomainError, NumericalFault
from hardylab.means.main import MeanFamily, MeanSpec, invert_generator
from hardylab.summation import CompensatedSum

logger = logging.getLogger(__name__)

# exp() headroom before the log-domain reference is moved
_RESCALE_AT = 600.0


class MeanAccumulator:
    """Single-owner streaming evaluator; ``value`` is the mean of all pushes."""

    __slots__ = ("spec", "count", "low", "high")

    def __init__(self, spec: MeanSpec):
        self.spec = spec
        self.count = 0
        self.low = math.inf
        self.high = -math.inf

    def push(self, x: float) -> None:
        if not (x > 0 and math.isfinite(x)):
            raise MeanDomainError(
                f"term {self.count + 1} = {x!r} is not a positive finite number"
            )
        self._check(x)
        self._push(x)
        self.count += 1
        if x < self.low:
            self.low = x
        if x > self.high:
            self.high = x

    def _check(self, x: float) -> None:
        """Family-specific domain check, run before any state changes."""

    def _push(self, x: float) -> None:
        raise NotImplementedError

    def _value(self) -> float:
        raise NotImplementedError

    @property
    def value(self) -> float:
        if self.count == 0:
            raise MeanDomainError("mean of an empty prefix is undefined")
        result = self._value()
        if math.isnan(result):
            raise NumericalFault(
                f"{self.spec.display_label} accumulator produced NaN after "
                f"{self.count} terms"
            )
        return min(max(result, self.low), self.high)


class ArithmeticAccumulator(MeanAccumulator):
    __slots__ = ("_sum",)

    def __init__(self, spec: MeanSpec):
        super().__init__(spec)
        self._sum = CompensatedSum()

    def _push(self, x: float) -> None:
        self._sum.add(x)

    def _value(self) -> float:
        return self._sum.value / self.count


class GeometricAccumulator(MeanAccumulator):
    __slots__ = ("_logs",)

    def __init__(self, spec: MeanSpec):
        super().__init__(spec)
        self._logs = CompensatedSum()

    def _push(self, x: float) -> None:
        self._logs.add(math.log(x))

    def _value(self) -> float:
        return math.exp(self._logs.value / self.count)


class HarmonicAccumulator(MeanAccumulator):
    __slots__ = ("_reciprocals",)

    def __init__(self, spec: MeanSpec):
        super().__init__(spec)
        self._reciprocals = CompensatedSum()

    def _push(self, x: float) -> None:
        self._reciprocals.add(1.0 / x)

    def _value(self) -> float:
        return self.count / self._reciprocals.value


class MinAccumulator(MeanAccumulator):
    __slots__ = ()

    def _push(self, x: float) -> None:
        pass

    def _value(self) -> float:
        return self.low


class MaxAccumulator(MeanAccumulator):
    __slots__ = ()

    def _push(self, x: float) -> None:
        pass

    def _value(self) -> float:
        return self.high


class PowerAccumulator(MeanAccumulator):
    """
    Power mean in the log domain: sum exp(p*ln x - ref) against a reference
    exponent that only moves when a new term would overflow exp().
    """

    __slots__ = ("_p", "_ref", "_scaled")

    def __init__(self, spec: MeanSpec):
        super().__init__(spec)
        self._p = spec.p
        self._ref = None
        self._scaled = CompensatedSum()

    def _push(self, x: float) -> None:
        exponent = self._p * math.log(x)
        if self._ref is None:
            self._ref = exponent
        elif exponent - self._ref > _RESCALE_AT:
            self._scaled.scale(math.exp(self._ref - exponent))
            self._ref = exponent
        self._scaled.add(math.exp(exponent - self._ref))

    def _value(self) -> float:
        average = self._scaled.value / self.count
        return math.exp((self._ref + math.log(average)) / self._p)


class QuasiarithmeticAccumulator(MeanAccumulator):
    __slots__ = ("_expr", "_images", "_domain")

    def __init__(self, spec: MeanSpec):
        super().__init__(spec)
        self._expr = spec.expr
        self._images = CompensatedSum()
        self._domain = spec.working_domain

    def _check(self, x: float) -> None:
        lo, hi = self._domain
        if not (lo <= x <= hi):
            raise MeanDomainError(
                f"term {self.count + 1} = {x!r} outside the generator domain "
                f"[{lo!r}, {hi!r}]"
            )

    def _push(self, x: float) -> None:
        self._images.add(self._expr(x))

    def _value(self) -> float:
        average = self._images.value / self.count
        return invert_generator(self._expr, average, self.low, self.high)


_ACCUMULATORS = {
    MeanFamily.ARITHMETIC: ArithmeticAccumulator,
    MeanFamily.GEOMETRIC: GeometricAccumulator,
    MeanFamily.HARMONIC: HarmonicAccumulator,
    MeanFamily.MIN: MinAccumulator,
    MeanFamily.MAX: MaxAccumulator,
    MeanFamily.POWER: PowerAccumulator,
    MeanFamily.QUASIARITHMETIC: QuasiarithmeticAccumulator,
}


def accumulator_for(spec: MeanSpec) -> MeanAccumulator:
    """Fresh streaming accumulator for ``spec``."""
    if spec.family is MeanFamily.POWER and spec.p == 0:
        return GeometricAccumulator(spec)
    return _ACCUMULATORS[spec.family](spec)


def prefix_means(spec: MeanSpec, a, N: int) -> List[float]:
    """
    Streaming prefix means (M(a_1), M(a_1, a_2), ..., M(a_1, ..., a_N)).

    Args:
        spec: The mean to evaluate
        a: A sequence rule (anything with ``terms(N)``) or a sequence of floats
        N: Number of prefixes

    Returns:
        List of N prefix means computed in one pass
    """
    if N < 1:
        raise ValueError(f"prefix_means needs N >= 1, got {N}")
    values = a.terms(N) if hasattr(a, "terms") else list(a)[:N]
    if len(values) < N:
        raise ValueError(f"sequence has only {len(values)} terms, {N} requested")
    acc = accumulator_for(spec)
    out = []
    for value in values:
        acc.push(value)
        out.append(acc.value)
    logger.debug("Streamed %d prefix means of %s", N, spec.display_label)
    return out
