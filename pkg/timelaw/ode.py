"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ._common import make_grid, to_positive_real, to_real
from ._constant import DEFAULT_VARIANT, CurveKind, RhsVariant
from .cost import StateVector, TimeLaw, Trajectory
from .curve import CurveModel, GeometricCoefficients, regular_coefficients
from .error import CurveError, DegenerateSolutionError


ArrayLike = Union[float, np.ndarray]

_SERIES_TERMS = 40


def _jerk_rate(
    coefficients: GeometricCoefficients,
    z1: ArrayLike,
    z2: ArrayLike,
    z3: ArrayLike,
    am: float,
    variant: RhsVariant,
) -> ArrayLike:
    G, S, _, T, U, V = coefficients

    if variant == RhsVariant.PAPER_PRINTED:
        W = V + 4.0 * U
    else:
        W = V

    z1_sq = z1 * z1

    # T / G is grouped so that the circle reduces exactly to its closed form
    return (
        z2 / am
        + S * z1_sq / (am * G)
        - (S / G) * (4.0 * z1 * z3 + 3.0 * z2 * z2)
        - 6.0 * (T / G) * z1_sq * z2
        - (W / G) * z1_sq * z1_sq
    )


def state_derivative(
    curve: CurveModel, states: np.ndarray, am: float, variant: RhsVariant = DEFAULT_VARIANT
) -> np.ndarray:
    """
    Vectorized right-hand side of the reduced system.

    :param states: Array of shape ``(..., 4)``.
    :param am: Product of the regularization weight and the mass.
    """

    z0, z1, z2, z3 = np.moveaxis(np.asarray(states, dtype=float), -1, 0)
    coefficients = regular_coefficients(curve, z0)

    return np.stack([z1, z2, z3, _jerk_rate(coefficients, z1, z2, z3, am, variant)], axis=-1)


def rhs(
    curve: CurveModel,
    z: StateVector,
    alpha: float,
    mass: float,
    variant: RhsVariant = DEFAULT_VARIANT,
) -> Tuple[float, float, float, float]:
    """
    Right-hand side ``(z0', z1', z2', z3')`` of the reduced first-order system.
    Depends on ``alpha`` and ``mass`` only through their product.

    :raises timelaw.error.SingularParameterizationError:
        If ``x'^2 + y'^2`` vanishes at ``z0``.
    :raises timelaw.error.InvalidParameterError:
        If ``alpha`` or ``mass`` is not positive.
    """

    am = to_positive_real(alpha, "alpha") * to_positive_real(mass, "mass")
    z0, z1, z2, z3 = (float(value) for value in z)
    coefficients = regular_coefficients(curve, z0)

    return (z1, z2, z3, float(_jerk_rate(coefficients, z1, z2, z3, am, variant)))


def printed_special_rhs(
    kind: Union[CurveKind, str], z: StateVector, alpha: float, mass: float
) -> float:
    """
    Closed-form jerk rate of the straight line and of the circle.
    Used to cross-check :py:func:`rhs`.
    """

    kind = CurveKind(kind)
    am = alpha * mass
    z1 = z[1]
    z2 = z[2]

    if kind == CurveKind.LINE:
        return z2 / am
    if kind == CurveKind.CIRCLE:
        return z2 / am + 6.0 * z1**2 * z2

    raise CurveError(f"no closed-form equation for {kind.value} curves")


def _sinh_minus_identity(x: float) -> float:
    """sinh(x) - x"""

    if abs(x) >= 1.0:
        return math.sinh(x) - x

    term = x
    total = 0.0
    for k in range(1, _SERIES_TERMS):
        term *= x * x / ((2 * k) * (2 * k + 1))
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break

    return total


def _sinh_minus_identity_cosh(x: float) -> float:
    """sinh(x) - x cosh(x)"""

    if abs(x) >= 1.0:
        return math.sinh(x) - x * math.cosh(x)

    term = x
    total = 0.0
    for k in range(1, _SERIES_TERMS):
        term *= x * x / ((2 * k) * (2 * k + 1))
        total -= 2 * k * term
        if abs(term) <= 1e-17 * abs(total):
            break

    return total


def delta_forms(gamma: float) -> Tuple[float, float]:
    """
    Evaluate the two equivalent expressions of the straight-line denominator:
    ``sinh(g) (sinh(g) - g) - (cosh(g) - 1)^2`` and
    ``2 (cosh(g) - 1) - g sinh(g)``.
    """

    half_sinh = math.sinh(0.5 * gamma)

    if gamma < 2.0:
        cosh_minus_one = 2.0 * half_sinh * half_sinh
        product = math.sinh(gamma) * _sinh_minus_identity(gamma) - cosh_minus_one**2
    else:
        # sinh^2 - (cosh - 1)^2 factored as a difference of squares
        product = -math.expm1(-gamma) * math.expm1(gamma) - gamma * math.sinh(gamma)

    difference = 4.0 * half_sinh * _sinh_minus_identity_cosh(0.5 * gamma)

    return (product, difference)


@dataclass(frozen=True)
class LineLaw:
    """
    Closed-form optimal law for a straight-line trajectory:
    ``p(t) = A sinh(gamma t) + B cosh(gamma t) + C t + D``.
    """

    p0: float
    p1: float
    gamma: float
    A: float
    B: float
    C: float
    D: float
    Delta: float

    @property
    def c_plus(self) -> float:
        # coefficient of exp(gamma t)
        return -(self.p1 - self.p0) * math.expm1(-self.gamma) / (2.0 * self.Delta)

    @property
    def c_minus(self) -> float:
        # coefficient of exp(-gamma t)
        return -(self.p1 - self.p0) * math.expm1(self.gamma) / (2.0 * self.Delta)

    def evaluate(self, t: ArrayLike, order: int = 0) -> ArrayLike:
        """
        Evaluate ``p`` or one of its time derivatives.

        :param order: Derivative order (``0`` for ``p`` itself).
        """

        if order < 0:
            raise ValueError(f"derivative order must be non-negative: {order}")

        t = np.asarray(t, dtype=float)
        gamma = self.gamma
        c_plus = self.c_plus
        c_minus = self.c_minus

        if order == 0:
            return (
                self.p0
                + c_plus * np.expm1(gamma * t)
                + c_minus * np.expm1(-gamma * t)
                + self.C * t
            )

        value = c_plus * gamma**order * np.exp(gamma * t) + c_minus * (-gamma) ** order * np.exp(
            -gamma * t
        )
        if order == 1:
            value = value + self.C

        return value

    def states(self, t: ArrayLike) -> np.ndarray:
        """
        :return: States ``(z0, z1, z2, z3)`` with shape ``shape(t) + (4,)``.
        """

        return np.stack([self.evaluate(t, order) for order in range(4)], axis=-1)

    def law(self, n: int) -> TimeLaw:
        return TimeLaw(self.evaluate(make_grid(n)))

    def trajectory(self, n: int) -> Trajectory:
        return Trajectory(self.states(make_grid(n)))


def line_analytic(p0: float, p1: float, alpha: float, mass: float) -> LineLaw:
    """
    Closed-form solution for a straight-line trajectory with rest-to-rest
    boundary conditions.

    :raises timelaw.error.DegenerateSolutionError:
        If the denominator vanishes or the coefficients overflow.
    """

    p0 = to_real(p0, "p0")
    p1 = to_real(p1, "p1")
    am = to_positive_real(alpha, "alpha") * to_positive_real(mass, "mass")

    gamma = 1.0 / math.sqrt(am)
    displacement = p1 - p0

    try:
        sinh_gamma = math.sinh(gamma)
        half_sinh = math.sinh(0.5 * gamma)
        _, delta = delta_forms(gamma)
    except OverflowError:
        raise DegenerateSolutionError(f"closed form is not representable: gamma={gamma}")

    if delta == 0 or not math.isfinite(delta):
        raise DegenerateSolutionError(f"closed form is not representable: Delta={delta}")

    A = displacement * sinh_gamma / delta
    B = -displacement * 2.0 * half_sinh * half_sinh / delta
    C = -A * gamma
    D = p0 - B

    if not all(math.isfinite(value) for value in (A, B, C, D)):
        raise DegenerateSolutionError(f"closed form is not representable: gamma={gamma}")

    return LineLaw(p0=p0, p1=p1, gamma=gamma, A=A, B=B, C=C, D=D, Delta=delta)
