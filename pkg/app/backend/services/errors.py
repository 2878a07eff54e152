from __future__ import annotations

from typing import Optional


class LerchError(RuntimeError):
    pass


class DomainError(LerchError, ValueError):
    """An argument lies outside the region where the requested evaluation is defined."""


class UsageError(LerchError, ValueError):
    """The call itself is malformed (bad order, bad path/argument combination)."""


class TruncationError(LerchError, ArithmeticError):
    """A series hit its term cap before its stopping rule fired."""

    def __init__(self, message: str, best: complex, order: int) -> None:
        super().__init__(message)
        self.best = best
        self.order = order


class AccuracyError(LerchError, ArithmeticError):
    """An oracle could not reach the requested accuracy."""

    def __init__(self, message: str, best: Optional[complex] = None, error_estimate: Optional[float] = None) -> None:
        super().__init__(message)
        self.best = best
        self.error_estimate = error_estimate


class DegenerateReferenceError(AccuracyError):
    pass
