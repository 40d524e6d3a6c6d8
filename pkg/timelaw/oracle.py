"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from ._common import max_abs, to_positive_real, to_real, validate_cell_count
from ._logger import logger
from .cost import (
    CostBreakdown,
    TimeLaw,
    discrete_cost,
    enforce_rest_nodes,
    evaluate_cost,
    smoothstep_law,
)
from .curve import CurveModel, geometric_coefficients
from .error import InvalidParameterError, SingularParameterizationError


MIN_ORACLE_CELLS = 200

_PROGRESS_INTERVAL = 1000


@dataclass(frozen=True)
class OracleConfig:
    """
    Parameters of the direct minimization of the discretized cost.

    :param n: Grid cell count (even, at least 200).
    :param grad_tol:
        Infinity-norm tolerance of the search direction, the preconditioned
        gradient, in units of ``p``.
    :param decrease_tol:
        Tolerance of the predicted decrease ``g . P^-1 g / 2`` of a full step,
        relative to the cost. The descent is stationary when either
        tolerance is met.
    :param max_iters: Iteration budget.
    :param initial_step: First trial step length.
    :param grow: Step growth factor when no curvature estimate is available.
    :param shrink: Step reduction factor on a cost increase.
    :param max_shrinks: Reductions tried before the descent stops.
    :param max_stalled_iters:
        Consecutive accepted steps without a strict cost decrease
        before the descent stops.
    :param preconditioned:
        Precondition the gradient with a banded approximation of the
        second variation.
    """

    n: int = 400
    grad_tol: float = 1e-8
    decrease_tol: float = 1e-12
    max_iters: int = 200000
    initial_step: float = 1.0
    grow: float = 1.5
    shrink: float = 0.5
    max_shrinks: int = 60
    max_stalled_iters: int = 100
    preconditioned: bool = True

    def __post_init__(self) -> None:
        validate_cell_count(self.n, MIN_ORACLE_CELLS, InvalidParameterError)

        for name in ("grad_tol", "decrease_tol", "initial_step", "grow"):
            to_positive_real(getattr(self, name), name)
        if not 0 < self.shrink < 1:
            raise InvalidParameterError(f"shrink must be in (0, 1): {self.shrink}")
        if self.grow < 1:
            raise InvalidParameterError(f"grow must be at least 1: {self.grow}")
        for name in ("max_iters", "max_shrinks", "max_stalled_iters"):
            if getattr(self, name) < 1:
                raise InvalidParameterError(f"{name} must be positive: {getattr(self, name)}")


@dataclass(frozen=True)
class OracleResult:
    law: TimeLaw
    cost: CostBreakdown

    #: discretized cost at the final iterate
    J: float

    #: infinity norm of the search direction at the final iterate
    grad_norm: float

    #: predicted relative cost decrease of a full step from the final iterate
    decrease: float

    iterations: int
    converged: bool

    #: discretized cost after each accepted step, starting value first
    history: Tuple[float, ...]


def discretize_cost(
    curve: CurveModel, p_values: Sequence[float], alpha: float, mass: float
) -> Tuple[float, np.ndarray]:
    """
    Discretized cost and its gradient with respect to the free nodes
    ``p_2 .. p_{n-2}``. See :py:func:`timelaw.cost.discrete_cost`.
    """

    return discrete_cost(curve, p_values, alpha, mass)


class _Preconditioner:
    """
    Banded operator ``h (m G K1 + alpha m^2 G K4)`` on the free nodes,
    where ``K1`` and ``K4`` are the second and fourth difference matrices
    and ``G`` is the mean of ``x'^2 + y'^2`` over the starting law.
    """

    def __init__(self, size: int, h: float, mean_g: float, alpha: float, mass: float) -> None:
        c1 = mass * mean_g / h
        c4 = alpha * mass * mass * mean_g / h**3

        bands = np.zeros((3, size))
        bands[2, :] = 2.0 * c1 + 6.0 * c4
        bands[1, 1:] = -c1 - 4.0 * c4
        bands[0, 2:] = c4

        self.__factor = cholesky_banded(bands, lower=False)

    def solve(self, gradient: np.ndarray) -> np.ndarray:
        return cho_solve_banded((self.__factor, False), gradient)


class _Identity:
    def solve(self, gradient: np.ndarray) -> np.ndarray:
        return gradient


class _Objective:
    def __init__(self, curve: CurveModel, template: np.ndarray, alpha: float, mass: float) -> None:
        self.__curve = curve
        self.__template = template
        self.__alpha = alpha
        self.__mass = mass

    def nodes(self, free: np.ndarray) -> np.ndarray:
        p = self.__template.copy()
        p[2:-2] = free

        return enforce_rest_nodes(p)

    def __call__(self, free: np.ndarray) -> Tuple[float, Optional[np.ndarray]]:
        if not np.all(np.isfinite(free)):
            return (math.inf, None)

        try:
            cost, gradient = discrete_cost(
                self.__curve, self.nodes(free), self.__alpha, self.__mass
            )
        except SingularParameterizationError:
            return (math.inf, None)

        if not math.isfinite(cost) or not np.all(np.isfinite(gradient)):
            return (math.inf, None)

        return (cost, gradient)


def _stationarity(gradient: np.ndarray, direction: np.ndarray, cost: float) -> Tuple[float, float]:
    decrease = 0.5 * float(gradient @ direction)
    if decrease > 0:
        decrease /= max(abs(cost), np.finfo(float).tiny)

    return (max_abs(direction), decrease)


def _is_stationary(config: OracleConfig, grad_norm: float, decrease: float) -> bool:
    return grad_norm <= config.grad_tol or decrease <= config.decrease_tol


def oracle_minimize(
    curve: CurveModel,
    p0: float,
    p1: float,
    alpha: float,
    mass: float,
    config: Optional[OracleConfig] = None,
    initial: Optional[TimeLaw] = None,
) -> OracleResult:
    """
    Minimize the discretized cost over the free grid values of ``p``
    with a preconditioned gradient descent.
    Step lengths are seeded by the Barzilai-Borwein rule and a step is
    accepted only if the cost does not increase.

    :param initial: Starting law, the cubic smoothstep if omitted.
    :return:
        Best iterate. ``converged`` is |True| when the search direction or
        the predicted decrease of a full step is within its tolerance.
    """

    if config is None:
        config = OracleConfig()

    p0 = to_real(p0, "p0")
    p1 = to_real(p1, "p1")
    to_positive_real(alpha, "alpha")
    to_positive_real(mass, "mass")

    n = config.n
    h = 1.0 / n

    if initial is None:
        initial = smoothstep_law(p0, p1, n)
    if initial.n != n:
        raise InvalidParameterError(f"initial law must have {n} cells: n={initial.n}")

    template = initial.p_values.copy()
    template[0] = p0
    template[-1] = p1
    objective = _Objective(curve, template, alpha, mass)

    free = template[2:-2].copy()
    cost, gradient = objective(free)
    if gradient is None:
        raise SingularParameterizationError("starting law has no finite discretized cost")

    if config.preconditioned:
        mean_g = float(np.mean(geometric_coefficients(curve, template).G))
        preconditioner = _Preconditioner(len(free), h, mean_g, alpha, mass)
    else:
        preconditioner = _Identity()

    direction = preconditioner.solve(gradient)
    step = config.initial_step
    history = [cost]
    stalled = 0
    iteration = 0
    grad_norm, decrease = _stationarity(gradient, direction, cost)

    while iteration < config.max_iters and not _is_stationary(config, grad_norm, decrease):
        trial_step = step
        for _ in range(config.max_shrinks):
            trial = free - trial_step * direction
            trial_cost, trial_gradient = objective(trial)
            if trial_cost <= cost:
                break
            trial_step *= config.shrink
        else:
            logger.debug(
                f"oracle stopped: no decreasing step, iteration={iteration}, "
                f"J={cost:.12e}, grad_norm={grad_norm:.3e}, decrease={decrease:.3e}"
            )
            break

        iteration += 1
        stalled = stalled + 1 if trial_cost == cost else 0

        displacement = trial - free
        gradient_change = trial_gradient - gradient
        curvature = float(displacement @ gradient_change)
        if curvature > 0:
            step = trial_step**2 * float(direction @ gradient) / curvature
        else:
            step = trial_step * config.grow

        free = trial
        cost = trial_cost
        gradient = trial_gradient
        direction = preconditioner.solve(gradient)
        grad_norm, decrease = _stationarity(gradient, direction, cost)
        history.append(cost)

        if iteration % _PROGRESS_INTERVAL == 0:
            logger.debug(
                f"oracle progress: iteration={iteration}, J={cost:.12e}, "
                f"grad_norm={grad_norm:.3e}, decrease={decrease:.3e}"
            )

        if stalled >= config.max_stalled_iters:
            logger.debug(f"oracle stopped: cost stalled, iteration={iteration}")
            break

    converged = _is_stationary(config, grad_norm, decrease)
    law = TimeLaw(objective.nodes(free))
    logger.debug(
        f"oracle finished: converged={converged}, iterations={iteration}, "
        f"J={cost:.12e}, grad_norm={grad_norm:.3e}, decrease={decrease:.3e}"
    )

    return OracleResult(
        law=law,
        cost=evaluate_cost(curve, law, alpha, mass),
        J=cost,
        grad_norm=grad_norm,
        decrease=decrease,
        iterations=iteration,
        converged=converged,
        history=tuple(history),
    )
