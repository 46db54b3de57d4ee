"""Exception hierarchy shared by every scperf module."""

from __future__ import annotations

__all__ = [
    "ScperfError",
    "InvalidInputError",
    "DomainError",
    "TruncationError",
    "UnsupportedCaseError",
    "DegenerateInputError",
]


class ScperfError(ValueError):
    """Base class for all errors raised by scperf."""


class InvalidInputError(ScperfError):
    """Malformed argument: non-finite coefficient, bad lead time, SL outside (0, 1)."""


class DomainError(ScperfError):
    """Model outside the region where the result is defined (e.g. non-stationary)."""


class TruncationError(ScperfError):
    """The MA(inf) tail cannot be certified below the requested tolerance.

    Attributes
    ----------
    achieved_bound : float
        Relative tail bound reached at the largest admissible index.
    """

    def __init__(self, message: str, achieved_bound: float = float("nan")):
        super().__init__(message)
        self.achieved_bound = achieved_bound


class UnsupportedCaseError(ScperfError):
    """Closed-form path asked to handle a case it does not cover (repeated roots)."""


class DegenerateInputError(ScperfError):
    """Sample variance is zero, so the variance ratio is undefined."""
