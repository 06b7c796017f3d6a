"""
Error hierarchy shared by every milnorkit service.
"""
from typing import Any, Dict, Optional


class MilnorkitError(Exception):
    """Base class for all milnorkit failures."""


class ShapeError(MilnorkitError, ValueError):
    """Mismatched variable counts, base rings or matrix shapes."""


class DomainError(MilnorkitError, ValueError):
    """An argument outside the domain of an operation."""


class NotFiniteLength(MilnorkitError):
    """No stabilization certificate below the working precision."""

    def __init__(self, message: str = "", degree: Optional[int] = None, precision: Any = None):
        super().__init__(message or "quotient is not certified of finite length")
        self.degree = degree
        self.precision = precision


class PrecisionInsufficient(NotFiniteLength):
    """The uniformizer precision N, not the degree bound, stopped the certificate."""


class JetBoundViolated(MilnorkitError):
    """g - f is not in the 3 mu power of the maximal ideal."""

    def __init__(self, order: int, bound: int):
        super().__init__(f"ord(g - f) = {order} < 3*mu = {bound}")
        self.order = order
        self.bound = bound


class LinearSolveFailed(MilnorkitError):
    """A graded linear system had no solution at the requested layer."""


class HomologyInconsistent(MilnorkitError):
    """Homology lengths recovered from a reduction were not consistent."""


class AllSamplesFailed(MilnorkitError):
    """Every sampled perturbation produced a non-smooth fiber."""

    def __init__(self, message: str, stats: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.stats = stats or {}


class SizeCapExceeded(MilnorkitError):
    """An enumeration would exceed the configured cap."""


class InputError(MilnorkitError):
    """Malformed input files or job settings."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field:
            location.append(f"field '{field}'")
        super().__init__(f"{message} ({', '.join(location)})" if location else message)
        self.field = field
        self.line = line
