"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

import math
from typing import Any, Type

import numpy as np
import typepy
from scipy import integrate
from typepy import StrictLevel

from .error import GridError, InvalidParameterError, NonFiniteValueError


def to_real(value: Any, name: str, error_cls: Type[Exception] = InvalidParameterError) -> float:
    if isinstance(value, bool):
        raise error_cls(f"{name} must be a real number: {value!r}")

    if (
        typepy.Nan(value, strict_level=StrictLevel.MIN).is_type()
        or typepy.Infinity(value, strict_level=StrictLevel.MIN).is_type()
    ):
        raise NonFiniteValueError(f"{name} must be finite: {value!r}")

    if not typepy.RealNumber(value, strict_level=StrictLevel.MIN).is_type():
        raise error_cls(f"{name} must be a real number: {value!r}")

    converted = float(value)
    if not math.isfinite(converted):
        raise NonFiniteValueError(f"{name} must be finite: {value!r}")

    return converted


def to_integer(value: Any, name: str, error_cls: Type[Exception] = InvalidParameterError) -> int:
    integer = typepy.Integer(value, strict_level=StrictLevel.MIN)

    if isinstance(value, bool) or not integer.is_type():
        raise error_cls(f"{name} must be an integer: {value!r}")

    converted = int(integer.convert())
    if isinstance(value, float) and value != converted:
        raise error_cls(f"{name} must be an integer: {value!r}")

    return converted


def to_positive_real(value: Any, name: str) -> float:
    converted = to_real(value, name)
    if converted <= 0:
        raise InvalidParameterError(f"{name} must be greater than zero: {value!r}")

    return converted


def validate_cell_count(n: int, minimum: int, error_cls: Type[Exception] = GridError) -> None:
    """
    :raises GridError: If ``n`` is odd or less than ``minimum``.
    """

    if n < minimum:
        raise error_cls(f"grid needs at least {minimum} cells: n={n}")
    if n % 2 != 0:
        raise error_cls(f"grid cell count must be even: n={n}")


def make_grid(n: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n + 1)


def first_derivative(values: np.ndarray, h: float) -> np.ndarray:
    # second-order central inside, second-order one-sided at both ends
    return np.gradient(values, h, edge_order=2)


def second_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """
    Second-order accurate second derivative of uniformly sampled values.
    The two end nodes use the four-point one-sided stencil.
    """

    values = np.asarray(values, dtype=float)
    if len(values) < 4:
        raise GridError(f"at least four samples are required: {len(values)}")

    result = np.empty_like(values)
    result[1:-1] = values[2:] - 2.0 * values[1:-1] + values[:-2]
    result[0] = 2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]
    result[-1] = 2.0 * values[-1] - 5.0 * values[-2] + 4.0 * values[-3] - values[-4]

    return result / h**2


def trapezoid_weights(n: int, h: float) -> np.ndarray:
    weights = np.full(n + 1, h)
    weights[0] = weights[-1] = 0.5 * h

    return weights


def simpson(values: np.ndarray, h: float) -> float:
    return float(integrate.simpson(values, dx=h))


def max_abs(values: np.ndarray) -> float:
    values = np.asarray(values)
    if values.size == 0:
        return 0.0

    return float(np.max(np.abs(values)))


def rms(values: np.ndarray) -> float:
    values = np.asarray(values)
    if values.size == 0:
        return 0.0

    return float(np.sqrt(np.mean(np.square(values))))
