"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

import abc
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, NamedTuple, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from ._common import to_real
from ._constant import REGULARITY_THRESHOLD, CurveKind
from ._logger import logger
from .error import (
    CurveError,
    DegenerateCurveError,
    InvalidParameterError,
    NonFiniteValueError,
    SingularParameterizationError,
)


ArrayLike = Union[float, np.ndarray]

DERIVATIVE_ORDERS = (1, 2, 3, 4)


class DerivativeTable(NamedTuple):
    #: ``(x, x', x'', x''', x'''')`` at a parameter value
    x_derivs: Tuple[float, ...]

    #: ``(y, y', y'', y''', y'''')`` at a parameter value
    y_derivs: Tuple[float, ...]


class GeometricCoefficients(NamedTuple):
    G: ArrayLike
    S: ArrayLike
    Q: ArrayLike
    T: ArrayLike
    U: ArrayLike
    V: ArrayLike


class DerivativeCheck(NamedTuple):
    order: int
    max_deviation: float
    passed: bool


class ValidationReport(NamedTuple):
    checks: Tuple[DerivativeCheck, ...]
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, order: int) -> DerivativeCheck:
        for check in self.checks:
            if check.order == order:
                return check

        raise KeyError(order)


@dataclass(frozen=True)
class CurveSpec:
    """
    Serializable description of a planar parametric curve.

    :param kind: Curve family.
    :param params: Family specific parameters:
        ``line`` {k, b}, ``circle`` {R}, ``parabola`` {k, b},
        ``ellipse`` {a, b}, ``polynomial`` {x, y}
        (coefficients listed lowest degree first).
    """

    kind: CurveKind
    params: Mapping[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CurveSpec":
        if not isinstance(data, Mapping):
            raise CurveError(f"curve must be an object: {data!r}")

        try:
            kind = CurveKind(str(data["kind"]).strip().lower())
        except KeyError:
            raise CurveError("curve kind is required")
        except ValueError:
            raise CurveError(
                "unknown curve kind: expected one of {}, actual={}".format(
                    ", ".join(item.value for item in CurveKind), data["kind"]
                )
            )

        params = data.get("params", {})
        if not isinstance(params, Mapping):
            raise CurveError(f"curve params must be an object: {params!r}")

        return cls(kind=kind, params=dict(params))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "params": dict(self.params)}


def _stack(p: ArrayLike, *values: ArrayLike) -> np.ndarray:
    # broadcast scalar entries to the shape of p
    arrays = np.broadcast_arrays(np.asarray(p, dtype=float), *values)

    return np.stack([np.asarray(value, dtype=float) for value in arrays[1:]])


class CurveModel(metaclass=abc.ABCMeta):
    """
    Planar parametric curve ``(x(p), y(p))``.
    Instances are immutable and evaluate on the whole real line.
    """

    @property
    @abc.abstractmethod
    def kind(self) -> CurveKind:  # pragma: no cover
        pass

    @property
    @abc.abstractmethod
    def params(self) -> Dict[str, Any]:  # pragma: no cover
        pass

    @property
    def spec(self) -> CurveSpec:
        return CurveSpec(kind=self.kind, params=self.params)

    def __repr__(self) -> str:
        return "{}({})".format(
            self.__class__.__name__,
            ", ".join(f"{key}={value}" for key, value in self.params.items()),
        )

    @abc.abstractmethod
    def derivatives(self, p: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:  # pragma: no cover
        """
        :return:
            x and y derivative stacks of shape ``(5,) + shape(p)``,
            row ``k`` holds the derivative of order ``k``.
        """

    def position(self, p: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
        x_derivs, y_derivs = self.derivatives(p)

        return (x_derivs[0], y_derivs[0])


class LineCurve(CurveModel):
    def __init__(self, k: float, b: float = 0.0) -> None:
        self.__k = k
        self.__b = b

    @property
    def kind(self) -> CurveKind:
        return CurveKind.LINE

    @property
    def params(self) -> Dict[str, Any]:
        return {"k": self.__k, "b": self.__b}

    def derivatives(self, p: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        k = self.__k

        return (
            _stack(p, p, 1.0, 0.0, 0.0, 0.0),
            _stack(p, np.multiply(k, p) + self.__b, k, 0.0, 0.0, 0.0),
        )


class CircleCurve(CurveModel):
    def __init__(self, R: float) -> None:
        self.__radius = R

    @property
    def kind(self) -> CurveKind:
        return CurveKind.CIRCLE

    @property
    def params(self) -> Dict[str, Any]:
        return {"R": self.__radius}

    def derivatives(self, p: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        # shared products keep S = U = V = 0 and T = -G exact in floating point
        rc = self.__radius * np.cos(p)
        rs = self.__radius * np.sin(p)

        return (_stack(p, rc, -rs, -rc, rs, rc), _stack(p, rs, rc, -rs, -rc, rs))


class ParabolaCurve(CurveModel):
    def __init__(self, k: float, b: float = 0.0) -> None:
        self.__k = k
        self.__b = b

    @property
    def kind(self) -> CurveKind:
        return CurveKind.PARABOLA

    @property
    def params(self) -> Dict[str, Any]:
        return {"k": self.__k, "b": self.__b}

    def derivatives(self, p: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        k = self.__k
        p_array = np.asarray(p, dtype=float)

        return (
            _stack(p, p_array, 1.0, 0.0, 0.0, 0.0),
            _stack(p, k * p_array**2 + self.__b, 2.0 * k * p_array, 2.0 * k, 0.0, 0.0),
        )


class EllipseCurve(CurveModel):
    def __init__(self, a: float, b: float) -> None:
        self.__a = a
        self.__b = b

    @property
    def kind(self) -> CurveKind:
        return CurveKind.ELLIPSE

    @property
    def params(self) -> Dict[str, Any]:
        return {"a": self.__a, "b": self.__b}

    def derivatives(self, p: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        cos_p = np.cos(p)
        sin_p = np.sin(p)
        ac = self.__a * cos_p
        a_s = self.__a * sin_p
        bc = self.__b * cos_p
        bs = self.__b * sin_p

        return (_stack(p, ac, -a_s, -ac, a_s, ac), _stack(p, bs, bc, -bs, -bc, bs))


class PolynomialCurve(CurveModel):
    """
    Curve given by polynomial coordinates.
    Derivatives are exact polynomial differentiation.

    :param x: Coefficients of ``x(p)``, lowest degree first.
    :param y: Coefficients of ``y(p)``, lowest degree first.
    """

    def __init__(self, x: Sequence[float], y: Sequence[float]) -> None:
        self.__x = np.array(x, dtype=float)
        self.__y = np.array(y, dtype=float)
        self.__x_tables = [P.polyder(self.__x, order) for order in range(5)]
        self.__y_tables = [P.polyder(self.__y, order) for order in range(5)]

    @property
    def kind(self) -> CurveKind:
        return CurveKind.POLYNOMIAL

    @property
    def params(self) -> Dict[str, Any]:
        return {"x": self.__x.tolist(), "y": self.__y.tolist()}

    def derivatives(self, p: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        return (
            _stack(p, *[P.polyval(p, coefs) for coefs in self.__x_tables]),
            _stack(p, *[P.polyval(p, coefs) for coefs in self.__y_tables]),
        )


def _extract(spec: CurveSpec, required: Sequence[str], optional: Mapping[str, float]) -> List[Any]:
    unknown = set(spec.params) - set(required) - set(optional)
    if unknown:
        raise CurveError(
            "unknown {} parameters: {}".format(spec.kind.value, ", ".join(sorted(unknown)))
        )

    values = []
    for name in required:
        if name not in spec.params:
            raise CurveError(f"{spec.kind.value} curve requires parameter '{name}'")
        values.append(spec.params[name])
    for name, default in optional.items():
        values.append(spec.params.get(name, default))

    return values


def _to_coefficients(value: Any, name: str) -> List[float]:
    if isinstance(value, (str, bytes)) or not isinstance(value, Sequence):
        raise CurveError(f"polynomial coefficients '{name}' must be a list: {value!r}")
    if len(value) == 0:
        raise CurveError(f"empty polynomial coefficients: {name}")

    return [to_real(item, f"{name}[{i}]", CurveError) for i, item in enumerate(value)]


def make_curve(spec: CurveSpec) -> CurveModel:
    """
    Create an evaluable curve from a specification.

    :raises timelaw.error.DegenerateCurveError:
        If a radius or a semi-axis is not positive.
    :raises timelaw.error.CurveError:
        If parameters are missing, unknown or malformed.
    :raises timelaw.error.NonFiniteValueError:
        If a parameter is not finite.
    """

    kind = spec.kind

    if kind == CurveKind.LINE:
        k, b = _extract(spec, ["k"], {"b": 0.0})
        return LineCurve(to_real(k, "k", CurveError), to_real(b, "b", CurveError))

    if kind == CurveKind.PARABOLA:
        k, b = _extract(spec, ["k"], {"b": 0.0})
        return ParabolaCurve(to_real(k, "k", CurveError), to_real(b, "b", CurveError))

    if kind == CurveKind.CIRCLE:
        (radius,) = _extract(spec, ["R"], {})
        radius = to_real(radius, "R", CurveError)
        if radius <= 0:
            raise DegenerateCurveError(f"degenerate curve: radius must be positive, R={radius}")

        return CircleCurve(radius)

    if kind == CurveKind.ELLIPSE:
        a, b = _extract(spec, ["a", "b"], {})
        a = to_real(a, "a", CurveError)
        b = to_real(b, "b", CurveError)
        if a <= 0 or b <= 0:
            raise DegenerateCurveError(
                f"degenerate curve: semi-axes must be positive, a={a}, b={b}"
            )

        return EllipseCurve(a, b)

    if kind == CurveKind.POLYNOMIAL:
        x, y = _extract(spec, ["x", "y"], {})
        return PolynomialCurve(_to_coefficients(x, "x"), _to_coefficients(y, "y"))

    raise CurveError(f"unknown curve kind: {kind}")  # pragma: no cover


def eval_derivatives(curve: CurveModel, p: float) -> DerivativeTable:
    if not math.isfinite(p):
        raise NonFiniteValueError(f"parameter value must be finite: p={p}")

    x_derivs, y_derivs = curve.derivatives(float(p))

    return DerivativeTable(
        x_derivs=tuple(float(value) for value in x_derivs),
        y_derivs=tuple(float(value) for value in y_derivs),
    )


def _coefficients_from_stacks(x_derivs: np.ndarray, y_derivs: np.ndarray) -> GeometricCoefficients:
    x1, x2, x3, x4 = x_derivs[1:]
    y1, y2, y3, y4 = y_derivs[1:]

    return GeometricCoefficients(
        G=x1 * x1 + y1 * y1,
        S=x1 * x2 + y1 * y2,
        Q=x2 * x2 + y2 * y2,
        T=x1 * x3 + y1 * y3,
        U=x2 * x3 + y2 * y3,
        V=x1 * x4 + y1 * y4,
    )


def geometric_coefficients(curve: CurveModel, p: ArrayLike) -> GeometricCoefficients:
    """
    Curve derivative products
    ``G = x'^2 + y'^2``, ``S = x'x'' + y'y''``, ``Q = x''^2 + y''^2``,
    ``T = x'x''' + y'y'''``, ``U = x''x''' + y''y'''``, ``V = x'x'''' + y'y''''``.
    ``p`` may be a scalar or an array.
    """

    return _coefficients_from_stacks(*curve.derivatives(p))


def regular_derivatives(curve: CurveModel, p: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """
    Same as :py:meth:`CurveModel.derivatives`, for solver paths that divide by ``G``.

    :raises timelaw.error.SingularParameterizationError:
        If ``x'^2 + y'^2`` falls below the regularity threshold at any ``p``.
    """

    x_derivs, y_derivs = curve.derivatives(p)
    singular = x_derivs[1] * x_derivs[1] + y_derivs[1] * y_derivs[1] < REGULARITY_THRESHOLD
    if np.any(singular):
        where = np.asarray(p, dtype=float)[singular] if np.ndim(p) else p
        raise SingularParameterizationError(
            f"singular parameterization: x'^2 + y'^2 < {REGULARITY_THRESHOLD} at p={where}"
        )

    return (x_derivs, y_derivs)


def regular_coefficients(curve: CurveModel, p: ArrayLike) -> GeometricCoefficients:
    return _coefficients_from_stacks(*regular_derivatives(curve, p))


def validate_derivatives(
    curve: CurveModel, p_grid: Sequence[float], h: float, tolerance: float = 1e-5
) -> ValidationReport:
    """
    Compare each analytic derivative of order 1 to 4 with the central difference
    of the next-lower order.
    The deviation is ``|analytic - difference| / max(1, |analytic|)``
    maximized over both coordinates and the grid.
    """

    p_array = np.asarray(p_grid, dtype=float)
    if p_array.size == 0:
        raise InvalidParameterError("parameter grid must not be empty")
    if not h > 0:
        raise InvalidParameterError(f"difference step must be positive: h={h}")

    analytic = curve.derivatives(p_array)
    forward = curve.derivatives(p_array + h)
    backward = curve.derivatives(p_array - h)

    checks = []
    for order in DERIVATIVE_ORDERS:
        deviation = 0.0
        for exact, plus, minus in zip(analytic, forward, backward):
            estimate = (plus[order - 1] - minus[order - 1]) / (2.0 * h)
            scale = np.maximum(1.0, np.abs(exact[order]))
            deviation = max(deviation, float(np.max(np.abs(exact[order] - estimate) / scale)))

        passed = deviation <= tolerance
        if not passed:
            logger.debug(
                f"derivative check failed: curve={curve}, order={order}, "
                f"max_deviation={deviation:.3e}, tolerance={tolerance:.1e}"
            )
        checks.append(DerivativeCheck(order=order, max_deviation=deviation, passed=passed))

    return ValidationReport(checks=tuple(checks), tolerance=tolerance)
