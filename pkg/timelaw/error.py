"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

from typing import Any, Optional, Sequence


class CurveError(ValueError):
    """
    Exception raised when a curve specification is invalid.
    """


class DegenerateCurveError(CurveError):
    """
    Exception raised when a curve collapses to a point
    (non-positive radius or semi-axis).
    """


class SingularParameterizationError(ValueError):
    """
    Exception raised when ``x'^2 + y'^2`` vanishes where a solver divides by it.
    """


class NonFiniteValueError(ValueError):
    """
    Exception raised when a parameter or a sample is not a finite number.
    """


class InvalidParameterError(ValueError):
    """
    Exception raised when a numerical parameter is out of its valid range.
    """


class GridError(ValueError):
    """
    Exception raised when a time grid is too short or has an odd cell count.
    """


class DegenerateSolutionError(ArithmeticError):
    """
    Exception raised when the closed-form straight-line law is not representable.
    """


class IntegrationError(RuntimeError):
    """
    Exception raised when the state of the reduced system becomes non-finite.
    """

    def __init__(self, message: str, t: Optional[float] = None) -> None:
        super().__init__(message)

        self.t = t


class NonConvergenceError(RuntimeError):
    """
    Exception raised when no solve path produced a converged time law.
    """

    def __init__(self, message: str, reports: Sequence[Any] = ()) -> None:
        super().__init__(message)

        self.reports = tuple(reports)


class ConfigError(ValueError):
    """
    Base class of run configuration errors.
    """


class ConfigParseError(ConfigError):
    """
    Exception raised when a configuration file cannot be read or parsed.
    """


class ConfigValidationError(ConfigError):
    """
    Exception raised when a configuration value has a wrong type or range.
    """
