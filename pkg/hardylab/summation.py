"""
Compensated summation.

Partial sums of 10^6 terms have to support 1e-12 relative comparisons against
``math.fsum``, so every running sum in the package goes through
``CompensatedSum`` (Kahan-Babuska/Neumaier variant: the carry is also correct
when the new term is larger than the running sum).
"""

from typing import Iterable, List


class CompensatedSum:
    """Running sum with a separately tracked rounding carry."""

    __slots__ = ("_sum", "_carry")

    def __init__(self, start: float = 0.0):
        self._sum = float(start)
        self._carry = 0.0

    def add(self, value: float) -> None:
        total = self._sum + value
        if abs(self._sum) >= abs(value):
            self._carry += (self._sum - total) + value
        else:
            self._carry += (value - total) + self._sum
        self._sum = total

    def scale(self, factor: float) -> None:
        """Multiply the running sum (and its carry) by ``factor``."""
        self._sum *= factor
        self._carry *= factor

    def at_least(self, bound: float) -> bool:
        """Exact ``sum >= bound`` decision while ``sum`` is within a factor 2 of it."""
        return (self._sum - bound) + self._carry >= 0

    @property
    def value(self) -> float:
        return self._sum + self._carry

    def __float__(self) -> float:
        return self.value


def running_sums(values: Iterable[float]) -> List[float]:
    """Compensated prefix sums: entry i is the sum of the first i+1 values."""
    acc = CompensatedSum()
    out = []
    for value in values:
        acc.add(value)
        out.append(acc.value)
    return out
