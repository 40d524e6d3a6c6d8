"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from ._common import (
    first_derivative,
    make_grid,
    max_abs,
    second_derivative,
    simpson,
    to_positive_real,
    trapezoid_weights,
    validate_cell_count,
)
from .curve import CurveModel, DerivativeTable, regular_derivatives
from .error import GridError, NonFiniteValueError


MIN_LAW_CELLS = 4
MIN_RESIDUAL_CELLS = 8


class StateVector(NamedTuple):
    #: p
    z0: float

    #: first time derivative of p
    z1: float

    #: second time derivative of p
    z2: float

    #: third time derivative of p
    z3: float


class Kinematics(NamedTuple):
    x_dot: float
    y_dot: float
    x_ddot: float
    y_ddot: float
    x_dddot: float
    y_dddot: float

    #: available only when the derivative of ``z3`` was supplied
    x_ddddot: Optional[float] = None
    y_ddddot: Optional[float] = None


class FTerms(NamedTuple):
    f1: float
    f2: float
    f3: float


class GradientCheck(NamedTuple):
    max_error: float
    passed: bool


@dataclass(frozen=True)
class CostBreakdown:
    #: (m/2) * integral of (x_dot^2 + y_dot^2)
    kinetic: float

    #: integral of (x_ddot^2 + y_ddot^2)
    inertia_measure: float

    #: kinetic + (alpha * m^2 / 2) * inertia_measure
    total: float

    @classmethod
    def from_parts(
        cls, kinetic: float, inertia_measure: float, alpha: float, mass: float
    ) -> "CostBreakdown":
        return cls(
            kinetic=kinetic,
            inertia_measure=inertia_measure,
            total=kinetic + 0.5 * alpha * mass**2 * inertia_measure,
        )


class TimeLaw:
    """
    Time law ``p(t)`` sampled on the uniform grid ``t_i = i / n`` of ``[0, 1]``.

    :param p_values: ``n + 1`` samples.
    :raises timelaw.error.GridError: If ``n`` is odd or less than 4.
    :raises timelaw.error.NonFiniteValueError: If a sample is not finite.
    """

    def __init__(self, p_values: Sequence[float]) -> None:
        values = np.array(p_values, dtype=float)

        if values.ndim != 1:
            raise GridError(f"time law samples must be one-dimensional: shape={values.shape}")
        validate_cell_count(len(values) - 1, MIN_LAW_CELLS)
        if not np.all(np.isfinite(values)):
            raise NonFiniteValueError("time law samples must be finite")

        values.setflags(write=False)
        self.__p_values = values

    def __repr__(self) -> str:
        return "TimeLaw(n={}, p0={}, p1={})".format(
            self.n, self.__p_values[0], self.__p_values[-1]
        )

    def __len__(self) -> int:
        return len(self.__p_values)

    @property
    def p_values(self) -> np.ndarray:
        return self.__p_values

    @property
    def n(self) -> int:
        return len(self.__p_values) - 1

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def t(self) -> np.ndarray:
        return make_grid(self.n)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], n: int) -> "TimeLaw":
        return cls(np.broadcast_to(func(make_grid(n)), (n + 1,)))


class Trajectory:
    """
    States ``(z0, z1, z2, z3)`` of a time law on the uniform grid of ``[0, 1]``.
    """

    def __init__(self, states: Union[np.ndarray, Sequence[StateVector]]) -> None:
        values = np.array(states, dtype=float)

        if values.ndim != 2 or values.shape[1] != 4:
            raise GridError(f"states must have shape (n + 1, 4): shape={values.shape}")
        if len(values) < 2:
            raise GridError("a trajectory needs at least two states")
        if not np.all(np.isfinite(values)):
            raise NonFiniteValueError("trajectory states must be finite")

        values.setflags(write=False)
        self.__states = values

    def __repr__(self) -> str:
        return f"Trajectory(n={self.n})"

    def __len__(self) -> int:
        return len(self.__states)

    def __getitem__(self, index: int) -> StateVector:
        return StateVector(*(float(value) for value in self.__states[index]))

    @property
    def states(self) -> np.ndarray:
        return self.__states

    @property
    def n(self) -> int:
        return len(self.__states) - 1

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def t(self) -> np.ndarray:
        return make_grid(self.n)

    @property
    def z0(self) -> np.ndarray:
        return self.__states[:, 0]

    @property
    def z1(self) -> np.ndarray:
        return self.__states[:, 1]

    @property
    def z2(self) -> np.ndarray:
        return self.__states[:, 2]

    @property
    def z3(self) -> np.ndarray:
        return self.__states[:, 3]

    @property
    def law(self) -> TimeLaw:
        return TimeLaw(self.z0)


def smoothstep_states(p0: float, p1: float, t: Union[float, np.ndarray]) -> np.ndarray:
    """
    States of the cubic rest-to-rest law ``p0 + (p1 - p0)(3t^2 - 2t^3)``.

    :return: Array with shape ``shape(t) + (4,)``.
    """

    t = np.asarray(t, dtype=float)
    displacement = p1 - p0

    return np.stack(
        np.broadcast_arrays(
            p0 + displacement * t * t * (3.0 - 2.0 * t),
            displacement * 6.0 * t * (1.0 - t),
            displacement * (6.0 - 12.0 * t),
            -12.0 * displacement,
        ),
        axis=-1,
    )


def smoothstep_law(p0: float, p1: float, n: int) -> TimeLaw:
    return TimeLaw(smoothstep_states(p0, p1, make_grid(n))[:, 0])


def quintic_law(p0: float, p1: float, n: int) -> TimeLaw:
    t = make_grid(n)

    return TimeLaw(p0 + (p1 - p0) * t**3 * (10.0 - 15.0 * t + 6.0 * t * t))


def _as_trajectory(trajectory: Union[Trajectory, Sequence[StateVector]]) -> Trajectory:
    if isinstance(trajectory, Trajectory):
        return trajectory

    return Trajectory(trajectory)


def _check_weights(alpha: float, mass: float) -> None:
    to_positive_real(alpha, "alpha")
    to_positive_real(mass, "mass")


def kinematic_rates(x_derivs, y_derivs, z1, z2, z3):
    """
    Chain rule for the coordinate rates of a point moving with parameter
    rates ``z1, z2, z3``. Works element-wise on arrays.

    :return: ``(x_dot, y_dot, x_ddot, y_ddot, x_dddot, y_dddot)``
    """

    x1, x2, x3 = x_derivs[1:4]
    y1, y2, y3 = y_derivs[1:4]
    z1_sq = z1 * z1

    return (
        x1 * z1,
        y1 * z1,
        x2 * z1_sq + x1 * z2,
        y2 * z1_sq + y1 * z2,
        x3 * z1_sq * z1 + 3.0 * x2 * z1 * z2 + x1 * z3,
        y3 * z1_sq * z1 + 3.0 * y2 * z1 * z2 + y1 * z3,
    )


def _f_terms(x_derivs, y_derivs, z1, z2, alpha, mass):
    # works element-wise on scalars or arrays of samples
    x1, x2, x3 = x_derivs[1:4]
    y1, y2, y3 = y_derivs[1:4]
    x_dot, y_dot, x_ddot, y_ddot, _, _ = kinematic_rates(x_derivs, y_derivs, z1, z2, 0.0)
    am2 = alpha * mass * mass
    inertia_2 = x_ddot * x2 + y_ddot * y2

    f1 = (
        mass * (x_dot * x2 + y_dot * y2) * z1
        + am2 * (x_ddot * x3 + y_ddot * y3) * z1 * z1
        + am2 * inertia_2 * z2
    )
    f2 = mass * (x_dot * x1 + y_dot * y1) + 2.0 * am2 * inertia_2 * z1
    f3 = am2 * (x_ddot * x1 + y_ddot * y1)

    return (f1, f2, f3)


def chain_kinematics(
    table: DerivativeTable, z: StateVector, z3_dot: Optional[float] = None
) -> Kinematics:
    """
    Time derivatives of the coordinates of a point moving along the curve
    with parameter state ``z``.
    Fourth-order derivatives are computed only when ``z3_dot`` is given.
    """

    x_derivs = table.x_derivs
    y_derivs = table.y_derivs
    z1, z2, z3 = z.z1, z.z2, z.z3
    values = kinematic_rates(x_derivs, y_derivs, z1, z2, z3)

    if z3_dot is None:
        return Kinematics(*values)

    def fourth(derivs: Sequence[float]) -> float:
        d1, d2, d3, d4 = derivs[1:5]
        return (
            d4 * z1**4
            + 6.0 * d3 * z1**2 * z2
            + 3.0 * d2 * z2**2
            + 4.0 * d2 * z1 * z3
            + d1 * z3_dot
        )

    return Kinematics(*values, x_ddddot=fourth(x_derivs), y_ddddot=fourth(y_derivs))


def f_terms(curve: CurveModel, z: StateVector, alpha: float, mass: float) -> FTerms:
    x_derivs, y_derivs = curve.derivatives(float(z.z0))
    f1, f2, f3 = _f_terms(x_derivs, y_derivs, z.z1, z.z2, alpha, mass)

    return FTerms(float(f1), float(f2), float(f3))


def _cost_from_rates(
    curve: CurveModel,
    p: np.ndarray,
    p_dot: np.ndarray,
    p_ddot: np.ndarray,
    h: float,
    alpha: float,
    mass: float,
) -> CostBreakdown:
    x_derivs, y_derivs = regular_derivatives(curve, p)
    x_dot, y_dot, x_ddot, y_ddot, _, _ = kinematic_rates(x_derivs, y_derivs, p_dot, p_ddot, 0.0)

    return CostBreakdown.from_parts(
        kinetic=0.5 * mass * simpson(x_dot**2 + y_dot**2, h),
        inertia_measure=simpson(x_ddot**2 + y_ddot**2, h),
        alpha=alpha,
        mass=mass,
    )


def evaluate_cost(curve: CurveModel, law: TimeLaw, alpha: float, mass: float) -> CostBreakdown:
    """
    Evaluate the cost of a sampled time law.
    Time derivatives come from second-order finite differences,
    integrals from the composite Simpson rule.

    :raises timelaw.error.SingularParameterizationError:
        If ``x'^2 + y'^2`` vanishes at a grid node.
    """

    _check_weights(alpha, mass)

    p = law.p_values
    h = law.h

    return _cost_from_rates(
        curve, p, first_derivative(p, h), second_derivative(p, h), h, alpha, mass
    )


def evaluate_state_cost(
    curve: CurveModel,
    trajectory: Union[Trajectory, Sequence[StateVector]],
    alpha: float,
    mass: float,
) -> CostBreakdown:
    """
    Same as :py:func:`evaluate_cost`, using the velocity and acceleration
    carried by the states instead of differencing ``p``.
    """

    _check_weights(alpha, mass)
    trajectory = _as_trajectory(trajectory)
    validate_cell_count(trajectory.n, MIN_LAW_CELLS)

    return _cost_from_rates(
        curve, trajectory.z0, trajectory.z1, trajectory.z2, trajectory.h, alpha, mass
    )


def law_states(law: TimeLaw) -> Trajectory:
    p = law.p_values
    h = law.h
    p_ddot = second_derivative(p, h)

    return Trajectory(
        np.column_stack([p, first_derivative(p, h), p_ddot, first_derivative(p_ddot, h)])
    )


def el_residual(
    curve: CurveModel,
    trajectory: Union[Trajectory, Sequence[StateVector]],
    alpha: float,
    mass: float,
) -> np.ndarray:
    """
    Residual ``f1 - d(f2)/dt + d^2(f3)/dt^2`` of the stationarity equation,
    with the time derivatives of the sampled f-terms taken by
    second-order finite differences.

    :return: Residual at the interior nodes ``2 .. n - 2``.
    :raises timelaw.error.GridError: If the grid has fewer than 8 cells.
    """

    _check_weights(alpha, mass)
    trajectory = _as_trajectory(trajectory)

    n = trajectory.n
    if n < MIN_RESIDUAL_CELLS:
        raise GridError(f"grid too short for the residual: n={n} < {MIN_RESIDUAL_CELLS}")

    h = trajectory.h
    x_derivs, y_derivs = curve.derivatives(trajectory.z0)
    f1, f2, f3 = _f_terms(x_derivs, y_derivs, trajectory.z1, trajectory.z2, alpha, mass)
    residual = f1 - first_derivative(f2, h) + second_derivative(f3, h)

    return residual[2 : n - 1]


def _ghost_extended(p: np.ndarray) -> np.ndarray:
    n = len(p) - 1
    extended = np.empty(n + 3)
    extended[1:-1] = p
    extended[0] = p[1]
    extended[-1] = p[n - 1]

    return extended


def enforce_rest_nodes(p_values: Sequence[float]) -> np.ndarray:
    """
    Set the nodes next to both ends so that the second-order one-sided
    velocity vanishes at ``t = 0`` and ``t = 1``.
    """

    p = np.array(p_values, dtype=float)
    n = len(p) - 1
    p[1] = (3.0 * p[0] + p[2]) / 4.0
    p[n - 1] = (3.0 * p[n] + p[n - 2]) / 4.0

    return p


def discrete_cost(
    curve: CurveModel, p_values: Sequence[float], alpha: float, mass: float
) -> Tuple[float, np.ndarray]:
    """
    Discretized cost and its exact gradient with respect to the free nodes
    ``p_2 .. p_{n-2}``.

    Nodes ``p_1`` and ``p_{n-1}`` are overwritten by the rest condition,
    and the ends are reflected through ghost nodes ``p_{-1} = p_1``,
    ``p_{n+1} = p_{n-1}``.
    Velocity and acceleration are central differences, the integral is
    the composite trapezoid rule (uniform interior weights).

    :return: ``(J, gradient)`` with ``len(gradient) == n - 3``.
    """

    _check_weights(alpha, mass)

    validate_cell_count(len(p_values) - 1, MIN_LAW_CELLS)
    p = enforce_rest_nodes(p_values)
    n = len(p) - 1
    if not np.all(np.isfinite(p)):
        raise NonFiniteValueError("time law samples must be finite")

    h = 1.0 / n
    extended = _ghost_extended(p)
    p_dot = (extended[2:] - extended[:-2]) / (2.0 * h)
    p_ddot = (extended[2:] - 2.0 * extended[1:-1] + extended[:-2]) / h**2

    x_derivs, y_derivs = regular_derivatives(curve, p)
    x_dot, y_dot, x_ddot, y_ddot, _, _ = kinematic_rates(x_derivs, y_derivs, p_dot, p_ddot, 0.0)
    lagrangian = 0.5 * mass * (x_dot**2 + y_dot**2) + 0.5 * alpha * mass**2 * (
        x_ddot**2 + y_ddot**2
    )
    weights = trapezoid_weights(n, h)
    cost = float(weights @ lagrangian)

    # partial derivatives of the lagrangian in (p, p_dot, p_ddot) are the f-terms
    f1, f2, f3 = _f_terms(x_derivs, y_derivs, p_dot, p_ddot, alpha, mass)
    velocity_weight = weights * f2 / (2.0 * h)
    acceleration_weight = weights * f3 / h**2

    gradient = np.zeros(n + 3)
    gradient[1:-1] += weights * f1
    gradient[2:] += velocity_weight
    gradient[:-2] -= velocity_weight
    gradient[2:] += acceleration_weight
    gradient[1:-1] -= 2.0 * acceleration_weight
    gradient[:-2] += acceleration_weight

    nodal = gradient[1:-1].copy()
    nodal[1] += gradient[0]
    nodal[n - 1] += gradient[-1]
    nodal[2] += nodal[1] / 4.0
    nodal[n - 2] += nodal[n - 1] / 4.0

    return (cost, nodal[2 : n - 1])


def discrete_gradient(curve: CurveModel, law: TimeLaw, alpha: float, mass: float) -> np.ndarray:
    return discrete_cost(curve, law.p_values, alpha, mass)[1]


def check_gradient(
    curve: CurveModel,
    law: TimeLaw,
    alpha: float,
    mass: float,
    step: float = 1e-4,
    tolerance: float = 1e-6,
    floor: float = 1e-4,
    atol: float = 1e-12,
) -> GradientCheck:
    """
    Compare :py:func:`discrete_gradient` with fourth-order central
    differences of the discretized cost.

    The error of a component is ``(|analytic - difference| - atol) / max(|difference|, s)``
    with ``s = floor * max|difference|``, so every component above ``s`` is
    compared relatively. ``atol`` absorbs the rounding of gradients that vanish.
    """

    p = enforce_rest_nodes(law.p_values)
    n = len(p) - 1
    analytic = discrete_gradient(curve, law, alpha, mass)

    def shifted_cost(node: int, offset: float) -> float:
        shifted = p.copy()
        shifted[node] += offset

        return discrete_cost(curve, shifted, alpha, mass)[0]

    estimates = np.array(
        [
            (
                8.0 * (shifted_cost(node, step) - shifted_cost(node, -step))
                - (shifted_cost(node, 2.0 * step) - shifted_cost(node, -2.0 * step))
            )
            / (12.0 * step)
            for node in range(2, n - 1)
        ]
    )
    scale = max(floor * max_abs(estimates), np.finfo(float).tiny)
    errors = np.maximum(np.abs(analytic - estimates) - atol, 0.0) / np.maximum(
        np.abs(estimates), scale
    )
    max_error = max_abs(errors)

    return GradientCheck(max_error=max_error, passed=max_error <= tolerance)
