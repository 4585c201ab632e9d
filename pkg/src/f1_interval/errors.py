"""Exceptions raised by the F1 interval library."""

from typing import Optional


class F1IntervalError(Exception):
    """Base class for every error raised by this package."""


class DomainError(F1IntervalError, ValueError):
    """An argument lies outside the domain of the operation."""


class UndefinedEstimateError(DomainError):
    """The sample F1 score is undefined because there are no relevant documents."""

    def __init__(self, message: str = "F1 is undefined when tp + fp + fn = 0 (no relevant documents)"):
        super().__init__(message)


class ValidityError(DomainError):
    """Wilson-direct requested where its quartic is not guaranteed two roots."""

    def __init__(self, nu: int, alpha: float, min_nu: int):
        self.nu = nu
        self.alpha = alpha
        self.min_nu = min_nu
        super().__init__(
            f"wilson-direct needs nu >= {min_nu} at alpha={alpha:g} (got nu={nu})"
        )


class BracketError(F1IntervalError, ValueError):
    """The function has the same strict sign at both ends of the bracket."""


class ConvergenceError(F1IntervalError, ArithmeticError):
    """An iterative solver hit its iteration cap."""


class ConfigError(F1IntervalError, ValueError):
    """A sweep configuration file could not be read or is invalid."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = path or "<config>"
        if line is not None:
            location = f"{location}:{line}"
        super().__init__(f"{location}: {message}")
