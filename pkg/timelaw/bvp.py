"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np

from ._common import max_abs, rms, to_integer, to_positive_real, to_real, validate_cell_count
from ._constant import DEFAULT_VARIANT, RhsVariant, ShootingAnchor, SolveMethod, SolvePath
from ._logger import logger
from .cost import (
    CostBreakdown,
    StateVector,
    TimeLaw,
    Trajectory,
    el_residual,
    evaluate_cost,
    evaluate_state_cost,
    law_states,
    quintic_law,
    smoothstep_law,
    smoothstep_states,
)
from .curve import CurveModel
from .error import (
    DegenerateSolutionError,
    IntegrationError,
    InvalidParameterError,
    NonConvergenceError,
    SingularParameterizationError,
)
from .ode import line_analytic, state_derivative
from .oracle import OracleConfig, oracle_minimize


MIN_SOLVER_CELLS = 100

_CONTINUATION_RATIO = math.sqrt(10.0)
_MAX_CONTINUATION_REFINEMENTS = 12

__all__ = (
    "SolverConfig",
    "SolutionReport",
    "continuation",
    "initial_guess",
    "integrate_ivp",
    "quintic_law",
    "shoot",
    "smoothstep_law",
    "solution_from_law",
    "solve",
)


@dataclass(frozen=True)
class SolverConfig:
    """
    Parameters of the boundary value problem and of the shooting Newton iteration.

    :param alpha: Regularization weight (positive).
    :param mass: Tool mass (positive).
    :param p0: Parameter value at ``t = 0``.
    :param p1: Parameter value at ``t = 1``.
    :param n: Integration grid cells (even, at least 100).
    :param newton_tol:
        Boundary residual tolerance, scaled by ``max(1, |p1 - p0|)``.
    :param max_newton_iters: Newton iteration budget.
    :param variant: Right-hand side variant of the reduced system.
    :param anchor: Where the unknown initial state of the shooting IVP sits.
    :param max_halvings: Damping halvings tried per Newton step.
    :param jacobian_step:
        Relative forward-difference step of the shooting Jacobian.
    """

    alpha: float
    mass: float
    p0: float
    p1: float
    n: int = 1000
    newton_tol: float = 1e-10
    max_newton_iters: int = 50
    variant: RhsVariant = DEFAULT_VARIANT
    anchor: ShootingAnchor = ShootingAnchor.MIDPOINT
    max_halvings: int = 30
    jacobian_step: float = 1e-6

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", to_positive_real(self.alpha, "alpha"))
        object.__setattr__(self, "mass", to_positive_real(self.mass, "mass"))
        object.__setattr__(self, "p0", to_real(self.p0, "p0"))
        object.__setattr__(self, "p1", to_real(self.p1, "p1"))
        object.__setattr__(self, "n", to_integer(self.n, "n"))
        object.__setattr__(self, "newton_tol", to_positive_real(self.newton_tol, "newton_tol"))
        object.__setattr__(
            self, "jacobian_step", to_positive_real(self.jacobian_step, "jacobian_step")
        )
        object.__setattr__(self, "variant", RhsVariant(self.variant))
        object.__setattr__(self, "anchor", ShootingAnchor(self.anchor))

        validate_cell_count(self.n, MIN_SOLVER_CELLS, InvalidParameterError)
        if self.max_newton_iters < 1:
            raise InvalidParameterError(
                f"max_newton_iters must be positive: {self.max_newton_iters}"
            )
        if self.max_halvings < 0:
            raise InvalidParameterError(f"max_halvings must not be negative: {self.max_halvings}")

    @property
    def am(self) -> float:
        return self.alpha * self.mass

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def tolerance(self) -> float:
        return self.newton_tol * max(1.0, abs(self.p1 - self.p0))


@dataclass(frozen=True)
class SolutionReport:
    trajectory: Trajectory
    cost: CostBreakdown

    #: largest violation of the four rest-to-rest boundary conditions
    bc_residual: float

    el_residual_rms: float
    iterations: int
    converged: bool
    variant: RhsVariant
    path: SolvePath = SolvePath.SHOOT

    #: stationarity residual at the interior nodes ``2 .. n - 2``
    el_residuals: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)

    @property
    def law(self) -> TimeLaw:
        return self.trajectory.law


def initial_guess(config: SolverConfig) -> TimeLaw:
    return smoothstep_law(config.p0, config.p1, config.n)


def _propagate(
    curve: CurveModel,
    states: np.ndarray,
    steps: int,
    h: float,
    am: float,
    variant: RhsVariant,
    t_start: float = 0.0,
) -> np.ndarray:
    """
    Classical fourth-order Runge-Kutta with a fixed step.
    ``states`` may hold a batch of initial states with shape ``(k, 4)``.

    :return: Array of shape ``(steps + 1,) + states.shape``.
    """

    path = np.empty((steps + 1,) + states.shape)
    path[0] = states
    current = states

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for i in range(steps):
            k1 = state_derivative(curve, current, am, variant)
            k2 = state_derivative(curve, current + 0.5 * h * k1, am, variant)
            k3 = state_derivative(curve, current + 0.5 * h * k2, am, variant)
            k4 = state_derivative(curve, current + h * k3, am, variant)
            current = current + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

            if not np.all(np.isfinite(current)):
                t = t_start + (i + 1) * h
                raise IntegrationError(f"state became non-finite at t={t:.6g}", t=t)

            path[i + 1] = current

    return path


def integrate_ivp(curve: CurveModel, z_init: StateVector, config: SolverConfig) -> Trajectory:
    """
    Integrate the reduced system from ``t = 0`` to ``t = 1`` with ``config.n``
    fixed RK4 steps.

    :raises timelaw.error.IntegrationError: If the state becomes non-finite.
    :raises timelaw.error.SingularParameterizationError:
        If the path reaches a singular point of the curve.
    """

    states = np.array(z_init, dtype=float).reshape(1, 4)
    if not np.all(np.isfinite(states)):
        raise IntegrationError("initial state must be finite", t=0.0)

    path = _propagate(curve, states, config.n, config.h, config.am, config.variant)

    return Trajectory(path[:, 0, :])


class _ShootingMap:
    def __init__(self, curve: CurveModel, config: SolverConfig) -> None:
        self.__curve = curve
        self.__config = config

    @property
    def anchor_time(self) -> float:
        return 0.0 if self.__config.anchor == ShootingAnchor.START else 0.5

    def unknowns(self, state: Sequence[float]) -> np.ndarray:
        """Shooting unknowns from a full state at the anchor."""

        state = np.asarray(state, dtype=float)
        if self.__config.anchor == ShootingAnchor.START:
            return state[2:4].copy()

        return state.copy()

    def __integrate(self, unknowns: np.ndarray):
        config = self.__config
        curve = self.__curve
        batch = np.atleast_2d(unknowns)

        if config.anchor == ShootingAnchor.START:
            states = np.column_stack(
                [np.full(len(batch), config.p0), np.zeros(len(batch)), batch[:, 0], batch[:, 1]]
            )
            return (
                None,
                _propagate(curve, states, config.n, config.h, config.am, config.variant),
            )

        half = config.n // 2
        backward = _propagate(curve, batch, half, -config.h, config.am, config.variant, 0.5)
        forward = _propagate(curve, batch, half, config.h, config.am, config.variant, 0.5)

        return (backward, forward)

    def residual(self, unknowns: np.ndarray) -> np.ndarray:
        config = self.__config
        backward, forward = self.__integrate(unknowns)
        end = forward[-1]

        if backward is None:
            return np.column_stack([end[:, 0] - config.p1, end[:, 1]])

        start = backward[-1]

        return np.column_stack(
            [start[:, 0] - config.p0, start[:, 1], end[:, 0] - config.p1, end[:, 1]]
        )

    def trajectory(self, unknowns: np.ndarray) -> Trajectory:
        backward, forward = self.__integrate(unknowns)

        if backward is None:
            return Trajectory(forward[:, 0, :])

        return Trajectory(np.concatenate([backward[::-1, 0, :], forward[1:, 0, :]]))


def _try_residual(shooting_map: _ShootingMap, unknowns: np.ndarray) -> Optional[np.ndarray]:
    try:
        residual = shooting_map.residual(unknowns)[0]
    except (IntegrationError, SingularParameterizationError):
        return None

    if not np.all(np.isfinite(residual)):
        return None

    return residual


def _seeds(config: SolverConfig, anchor_time: float) -> List[np.ndarray]:
    seeds = [smoothstep_states(config.p0, config.p1, anchor_time)]

    try:
        seeds.append(
            line_analytic(config.p0, config.p1, config.alpha, config.mass).states(anchor_time)
        )
    except DegenerateSolutionError as e:
        logger.debug(f"straight-line seed unavailable: {e}")

    return seeds


def _bc_residual(trajectory: Trajectory, config: SolverConfig) -> float:
    first = trajectory[0]
    last = trajectory[-1]

    return max(
        abs(first.z0 - config.p0), abs(first.z1), abs(last.z0 - config.p1), abs(last.z1)
    )


def _report(
    curve: CurveModel,
    trajectory: Trajectory,
    cost: CostBreakdown,
    config: SolverConfig,
    iterations: int,
    converged: bool,
    path: SolvePath,
) -> SolutionReport:
    residuals = el_residual(curve, trajectory, config.alpha, config.mass)

    return SolutionReport(
        trajectory=trajectory,
        cost=cost,
        bc_residual=_bc_residual(trajectory, config),
        el_residual_rms=rms(residuals),
        iterations=iterations,
        converged=converged,
        variant=config.variant,
        path=path,
        el_residuals=residuals,
    )


def shoot(
    curve: CurveModel,
    config: SolverConfig,
    seed: Optional[Sequence[float]] = None,
    path: SolvePath = SolvePath.SHOOT,
) -> SolutionReport:
    """
    Solve the boundary value problem by single shooting.

    The unknown initial state sits at the anchor given by ``config.anchor``.
    A damped Newton iteration with a forward-difference Jacobian drives the
    boundary residuals to zero.

    :param seed:
        Full state ``(z0, z1, z2, z3)`` at the anchor to start from.
        Defaults to the better of the smoothstep and straight-line laws.
    :return:
        Report of the best iterate. ``converged`` is |False| when the
        iteration budget ran out or no damped step reduced the residual.
    :raises timelaw.error.IntegrationError:
        If no starting point can be integrated.
    """

    shooting_map = _ShootingMap(curve, config)

    if seed is None:
        candidates = _seeds(config, shooting_map.anchor_time)
    else:
        candidates = [np.asarray(seed, dtype=float)]

    unknowns: Optional[np.ndarray] = None
    residual: Optional[np.ndarray] = None
    for candidate in candidates:
        candidate_unknowns = shooting_map.unknowns(candidate)
        candidate_residual = _try_residual(shooting_map, candidate_unknowns)
        if candidate_residual is None:
            continue
        if residual is None or np.linalg.norm(candidate_residual) < np.linalg.norm(residual):
            unknowns = candidate_unknowns
            residual = candidate_residual

    if unknowns is None or residual is None:
        raise IntegrationError("shooting failed: no seed could be integrated")

    tolerance = config.tolerance
    norm = float(np.linalg.norm(residual))
    converged = max_abs(residual) <= tolerance
    iterations = 0

    while not converged and iterations < config.max_newton_iters:
        steps = config.jacobian_step * np.maximum(1.0, np.abs(unknowns))
        try:
            perturbed = shooting_map.residual(unknowns + np.diag(steps))
        except (IntegrationError, SingularParameterizationError) as e:
            logger.debug(f"shooting jacobian failed: {e}")
            break
        jacobian = ((perturbed - residual) / steps[:, np.newaxis]).T
        if not np.all(np.isfinite(jacobian)):
            logger.debug("shooting jacobian is not finite")
            break

        newton_step = np.linalg.lstsq(jacobian, -residual, rcond=None)[0]

        damping = 1.0
        accepted = False
        for _ in range(config.max_halvings + 1):
            trial = unknowns + damping * newton_step
            trial_residual = _try_residual(shooting_map, trial)
            if trial_residual is not None:
                trial_norm = float(np.linalg.norm(trial_residual))
                if trial_norm < norm:
                    accepted = True
                    break
            damping *= 0.5

        if not accepted:
            logger.debug(f"shooting stalled: iteration={iterations}, residual_norm={norm:.3e}")
            break

        iterations += 1
        unknowns = trial
        residual = trial_residual
        norm = trial_norm
        converged = max_abs(residual) <= tolerance
        logger.debug(
            f"newton iteration={iterations}, residual_norm={norm:.3e}, damping={damping:g}"
        )

    trajectory = shooting_map.trajectory(unknowns)

    return _report(
        curve,
        trajectory,
        evaluate_state_cost(curve, trajectory, config.alpha, config.mass),
        config,
        iterations,
        converged,
        path,
    )


def solution_from_law(
    curve: CurveModel,
    law: TimeLaw,
    config: SolverConfig,
    iterations: int = 0,
    converged: bool = True,
    path: SolvePath = SolvePath.ORACLE,
) -> SolutionReport:
    """
    Build a report for a sampled law, with states obtained by differencing.
    """

    return _report(
        curve,
        law_states(law),
        evaluate_cost(curve, law, config.alpha, config.mass),
        config,
        iterations,
        converged,
        path,
    )


def _anchor_index(n: int, anchor: ShootingAnchor) -> int:
    return 0 if anchor == ShootingAnchor.START else n // 2


def _anchor_state(law: TimeLaw, anchor: ShootingAnchor) -> np.ndarray:
    return law_states(law).states[_anchor_index(law.n, anchor)]


def _continuation_ladder(alpha: float) -> List[float]:
    """Regularization weights from ``1`` down to ``alpha``, evenly spaced in log scale."""

    if alpha >= 1.0:
        return [alpha]

    rungs = math.ceil(math.log(1.0 / alpha) / math.log(_CONTINUATION_RATIO))

    return [alpha * _CONTINUATION_RATIO**k for k in range(rungs, 0, -1)] + [alpha]


def continuation(curve: CurveModel, config: SolverConfig) -> SolutionReport:
    """
    Solve by shooting along a descending ladder of ``alpha``.
    Each rung is seeded with the anchor state of the previous converged
    rung, and a failed rung is retried from the geometric mean of the
    two weights.

    :return:
        Report at ``config.alpha`` when every rung converged, otherwise
        the report of the last rung attempted with ``converged`` unset.
    :raises timelaw.error.IntegrationError:
        If the first rung cannot be integrated.
    """

    pending = _continuation_ladder(config.alpha)
    seed: Optional[np.ndarray] = None
    solved_alpha: Optional[float] = None
    report: Optional[SolutionReport] = None
    rung: Optional[SolutionReport]
    refinements = 0
    iterations = 0

    while pending:
        alpha = pending[0]
        rung_config = replace(config, alpha=alpha)
        try:
            rung = shoot(curve, rung_config, seed=seed, path=SolvePath.CONTINUATION)
        except (IntegrationError, SingularParameterizationError) as e:
            logger.debug(f"continuation rung failed: alpha={alpha:.6e}, {e}")
            rung = None

        if rung is not None:
            report = rung
            iterations += rung.iterations

        if rung is not None and rung.converged:
            logger.debug(f"continuation rung converged: alpha={alpha:.6e}")
            seed = rung.trajectory.states[_anchor_index(rung.trajectory.n, config.anchor)]
            solved_alpha = alpha
            pending.pop(0)
            continue

        if solved_alpha is None or refinements >= _MAX_CONTINUATION_REFINEMENTS:
            break

        refinements += 1
        pending.insert(0, math.sqrt(solved_alpha * alpha))

    if report is None:
        raise IntegrationError("continuation failed: no rung could be integrated")

    return replace(report, iterations=iterations, converged=not pending)



def solve(
    curve: CurveModel,
    config: SolverConfig,
    method: SolveMethod = SolveMethod.AUTO,
    oracle_config: Optional[OracleConfig] = None,
) -> SolutionReport:
    """
    Solve for the optimal time law.

    Shooting runs first. When it does not converge and ``alpha < 1``, it is
    continued from larger weights by :py:func:`continuation`.
    With ``SolveMethod.AUTO`` the direct minimization runs next, and
    shooting is retried once from the state of the minimized law at the anchor.

    :raises timelaw.error.NonConvergenceError:
        If no path produced a converged law.
        The exception carries the reports of the attempted paths.
    """

    method = SolveMethod(method)
    if oracle_config is None:
        oracle_config = OracleConfig()

    if method == SolveMethod.ORACLE:
        result = oracle_minimize(
            curve, config.p0, config.p1, config.alpha, config.mass, oracle_config
        )
        report = solution_from_law(
            curve, result.law, config, result.iterations, result.converged, SolvePath.ORACLE
        )
        if not report.converged:
            raise NonConvergenceError("direct minimization did not converge", [report])

        return report

    reports: List[SolutionReport] = []
    try:
        report = shoot(curve, config)
    except (IntegrationError, SingularParameterizationError) as e:
        logger.debug(f"shooting failed: {e}")
    else:
        if report.converged:
            return report
        reports.append(report)

    if config.alpha < 1.0:
        logger.debug("shooting did not converge, continuing from larger alpha")
        try:
            report = continuation(curve, config)
        except (IntegrationError, SingularParameterizationError) as e:
            logger.debug(f"continuation failed: {e}")
        else:
            if report.converged:
                return report
            reports.append(report)

    if method == SolveMethod.SHOOT:
        raise NonConvergenceError("shooting did not converge", reports)

    logger.debug("shooting did not converge, falling back to direct minimization")
    result = oracle_minimize(curve, config.p0, config.p1, config.alpha, config.mass, oracle_config)
    reports.append(
        solution_from_law(
            curve, result.law, config, result.iterations, result.converged, SolvePath.ORACLE
        )
    )

    try:
        report = shoot(
            curve,
            config,
            seed=_anchor_state(result.law, config.anchor),
            path=SolvePath.ORACLE_RESEED,
        )
    except (IntegrationError, SingularParameterizationError) as e:
        logger.debug(f"re-seeded shooting failed: {e}")
    else:
        if report.converged:
            return report
        reports.append(report)

    raise NonConvergenceError("shooting did not converge, with or without re-seeding", reports)
