"""Exception hierarchy shared by every hardylab component."""

from typing import Any, Optional, Sequence


class HardyLabError(Exception):
    """Base class for all errors raised by hardylab."""


class GeneratorSyntaxError(HardyLabError, ValueError):
    """Raised when a generator expression cannot be parsed."""

    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at offset {offset} in {text!r}")
        self.text = text
        self.offset = offset


class UnknownIdentifierError(GeneratorSyntaxError):
    """Raised for identifiers other than the expression variable, log and exp."""


class ExprDomainError(HardyLabError, ValueError):
    """Raised when an expression node cannot be evaluated at the given point."""

    def __init__(self, message: str, node: Any = None):
        super().__init__(message)
        self.node = node


class MonotonicityError(HardyLabError, ValueError):
    """Raised when a generator is not strictly monotone on the sampled points."""

    def __init__(self, message: str, samples: Optional[Sequence[float]] = None):
        super().__init__(message)
        self.samples = list(samples or [])


class MeanDomainError(HardyLabError, ValueError):
    """Raised for empty vectors, nonpositive entries or entries outside a domain."""


class SequenceError(HardyLabError, ValueError):
    """Raised when a sequence rule produces an unusable term."""


class PartitionError(HardyLabError, ValueError):
    """Raised when a block partition cannot be built from the scanned prefix."""


class BudgetExhaustedError(PartitionError):
    """Raised when the scan budget ends before a weight-one block closes."""


class NumericalFault(HardyLabError, RuntimeError):
    """Raised when a computation produces a non-finite or inconsistent value."""


class CertificateViolation(NumericalFault):
    """Raised when a per-term certificate inequality fails beyond its slack."""

    def __init__(self, message: str, witness: Optional[dict] = None):
        super().__init__(message)
        self.witness = witness or {}
