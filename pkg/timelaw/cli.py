"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

import argparse
import dataclasses
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .__version__ import __version__
from ._common import max_abs
from ._constant import CurveKind, ExitCode, SolveMethod
from ._logger import logger, set_logger
from .artifact import (
    cost_dict,
    read_law_csv,
    report_dict,
    resolve_path,
    summary_entry,
    write_json,
    write_law_csv,
    write_series_csv,
    write_summary_csv,
)
from .bvp import SolutionReport, SolverConfig, smoothstep_law, solve
from .config import RunConfig, load_config, to_variant
from .cost import check_gradient, evaluate_cost, evaluate_state_cost
from .curve import CurveModel, CurveSpec, make_curve, validate_derivatives
from .error import (
    ConfigParseError,
    ConfigValidationError,
    CurveError,
    DegenerateSolutionError,
    GridError,
    IntegrationError,
    InvalidParameterError,
    NonConvergenceError,
    NonFiniteValueError,
    SingularParameterizationError,
)
from .ode import line_analytic
from .oracle import OracleConfig, oracle_minimize


DERIVATIVE_CHECK_POINTS = 100
DERIVATIVE_CHECK_STEP = 1e-4
GRADIENT_CHECK_CELLS = 20

_VALIDATION_ERRORS = (
    ConfigValidationError,
    CurveError,
    GridError,
    InvalidParameterError,
    NonFiniteValueError,
)
_SOLVER_ERRORS = (
    DegenerateSolutionError,
    IntegrationError,
    NonConvergenceError,
    SingularParameterizationError,
)


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timelaw",
        description="Optimal time laws for tools moving along planar parametric trajectories.",
    )
    parser.add_argument("-V", "--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="path to a JSON run configuration")
    common.add_argument(
        "--variant",
        choices=("paper", "expanded"),
        help="override the right-hand side variant of the reduced system",
    )
    common.add_argument(
        "--out-dir", default=".", help="directory for relative output paths (default: %(default)s)"
    )
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="enable log output (-vv for debug messages)",
    )

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    subparsers.add_parser("solve", parents=[common], help="solve a single configuration")
    sweep = subparsers.add_parser(
        "sweep", parents=[common], help="solve for every alpha of a list"
    )
    sweep.add_argument("--max-workers", type=int, help="number of worker processes")
    subparsers.add_parser(
        "compare", parents=[common], help="compare closed-form, shooting and oracle laws"
    )
    subparsers.add_parser(
        "validate", parents=[common], help="check curve derivatives and the discrete gradient"
    )
    evaluate = subparsers.add_parser(
        "evaluate", parents=[common], help="evaluate the cost of a sampled time law"
    )
    evaluate.add_argument("--law", required=True, help="CSV file with a 't,p' header")

    return parser


def _configure_logging(verbosity: int) -> None:
    if verbosity <= 0:
        set_logger(False)
        return

    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbosity > 1 else "INFO")
    set_logger(True)


def _load(args: argparse.Namespace) -> RunConfig:
    config = load_config(args.config)
    if args.variant:
        config = dataclasses.replace(config, variant=to_variant(args.variant))

    return config


def _law_path(csv_path: str) -> str:
    stem, ext = os.path.splitext(csv_path)

    return f"{stem}_law{ext or '.csv'}"


def _write_solution(
    config: RunConfig, curve: CurveModel, report: SolutionReport, out_dir: str
) -> None:
    write_series_csv(resolve_path(config.csv_path, out_dir), curve, report)
    write_law_csv(resolve_path(_law_path(config.csv_path), out_dir), report.law)
    write_json(resolve_path(config.report_path, out_dir), report_dict(report))


def run_solve(args: argparse.Namespace) -> int:
    config = _load(args)
    if len(config.alphas) > 1:
        raise ConfigValidationError("alpha is a list: use the sweep command")

    curve = make_curve(config.curve)
    try:
        report = solve(curve, config.solver_config(), config.method, config.oracle_config())
    except NonConvergenceError as e:
        if e.reports:
            _write_solution(config, curve, e.reports[-1], args.out_dir)
        raise

    _write_solution(config, curve, report, args.out_dir)

    return ExitCode.SUCCESS


def _solve_member(
    curve_spec: CurveSpec,
    solver_config: SolverConfig,
    method: SolveMethod,
    oracle_config: OracleConfig,
) -> Tuple[Optional[SolutionReport], str]:
    try:
        return (solve(make_curve(curve_spec), solver_config, method, oracle_config), "")
    except _SOLVER_ERRORS as e:
        reports = getattr(e, "reports", ())
        return (reports[-1] if reports else None, str(e))


def _member_path(csv_path: str, alpha: float) -> str:
    stem, ext = os.path.splitext(csv_path)

    return "{}_alpha_{!r}{}".format(stem, float(alpha), ext or ".csv")


def _summary_path(csv_path: str) -> str:
    stem, ext = os.path.splitext(csv_path)

    return f"{stem}_summary{ext or '.csv'}"


def run_sweep(args: argparse.Namespace) -> int:
    config = _load(args)
    if args.max_workers is not None:
        if args.max_workers < 1:
            raise ConfigValidationError(f"max_workers must be positive: {args.max_workers}")
        config = dataclasses.replace(config, max_workers=args.max_workers)

    curve = make_curve(config.curve)
    alphas = sorted(config.alphas)
    jobs = [
        (config.curve, config.solver_config(alpha), config.method, config.oracle_config())
        for alpha in alphas
    ]

    if config.max_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(config.max_workers, len(jobs))) as executor:
            results = list(executor.map(_solve_member, *zip(*jobs)))
    else:
        results = [_solve_member(*job) for job in jobs]

    members: List[Dict[str, Any]] = []
    entries = []
    for alpha, (report, error) in zip(alphas, results):
        member: Dict[str, Any] = {"alpha": alpha, "status": "converged" if not error else "failed"}
        if error:
            member["error"] = error
            logger.error(f"sweep member failed: alpha={alpha:g}, {error}")
        if report is not None:
            member["csv_path"] = _member_path(config.csv_path, alpha)
            member.update(report_dict(report))
            write_series_csv(resolve_path(member["csv_path"], args.out_dir), curve, report)
            if not error:
                entries.append(summary_entry(alpha, curve, report))
        members.append(member)

    summary_path = _summary_path(config.csv_path)
    write_summary_csv(resolve_path(summary_path, args.out_dir), entries)

    passed = all(member["status"] == "converged" for member in members)
    write_json(
        resolve_path(config.report_path, args.out_dir),
        {"summary_path": summary_path, "members": members, "passed": passed},
    )

    return ExitCode.SUCCESS if passed else ExitCode.SOLVER_ERROR


def run_compare(args: argparse.Namespace) -> int:
    config = _load(args)
    if config.curve.kind != CurveKind.LINE:
        raise ConfigValidationError(
            f"compare requires a line curve: kind={config.curve.kind.value}"
        )

    curve = make_curve(config.curve)
    solver_config = config.solver_config()
    oracle_config = config.oracle_config()

    analytic = line_analytic(config.p0, config.p1, config.alpha, config.mass)
    shot = solve(curve, solver_config, SolveMethod.SHOOT)
    oracle = oracle_minimize(
        curve, config.p0, config.p1, config.alpha, config.mass, oracle_config
    )

    shot_t = shot.trajectory.t
    shot_p = shot.trajectory.z0
    oracle_t = oracle.law.t
    oracle_p = oracle.law.p_values
    analytic_cost = evaluate_state_cost(
        curve, analytic.trajectory(solver_config.n), config.alpha, config.mass
    )

    write_json(
        resolve_path(config.report_path, args.out_dir),
        {
            "max_deviation": {
                "analytic_vs_shoot": max_abs(shot_p - analytic.evaluate(shot_t)),
                "analytic_vs_oracle": max_abs(oracle_p - analytic.evaluate(oracle_t)),
                "shoot_vs_oracle": max_abs(oracle_p - np.interp(oracle_t, shot_t, shot_p)),
            },
            "J_total": {
                "analytic": analytic_cost.total,
                "shoot": shot.cost.total,
                "oracle": oracle.cost.total,
            },
            "oracle_converged": oracle.converged,
        },
    )

    return ExitCode.SUCCESS


def run_validate(args: argparse.Namespace) -> int:
    config = _load(args)
    curve = make_curve(config.curve)

    derivatives = validate_derivatives(
        curve,
        np.linspace(config.p0, config.p1, DERIVATIVE_CHECK_POINTS),
        DERIVATIVE_CHECK_STEP,
        config.derivative_tol,
    )
    gradient = check_gradient(
        curve,
        smoothstep_law(config.p0, config.p1, GRADIENT_CHECK_CELLS),
        config.alpha,
        config.mass,
    )
    passed = derivatives.passed and gradient.passed

    write_json(
        resolve_path(config.report_path, args.out_dir),
        {
            "derivatives": {
                f"order_{check.order}": {
                    "max_deviation": check.max_deviation,
                    "passed": check.passed,
                }
                for check in derivatives.checks
            },
            "gradient": {"max_error": gradient.max_error, "passed": gradient.passed},
            "passed": passed,
        },
    )

    return ExitCode.SUCCESS if passed else ExitCode.VALIDATION_ERROR


def run_evaluate(args: argparse.Namespace) -> int:
    config = _load(args)
    curve = make_curve(config.curve)
    law = read_law_csv(args.law)
    cost = evaluate_cost(curve, law, config.alpha, config.mass)

    write_json(resolve_path(config.report_path, args.out_dir), cost_dict(cost))

    return ExitCode.SUCCESS


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "solve": run_solve,
    "sweep": run_sweep,
    "compare": run_compare,
    "validate": run_validate,
    "evaluate": run_evaluate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _make_parser().parse_args(argv)
    _configure_logging(args.verbose)

    try:
        return int(COMMANDS[args.command](args))
    except ConfigParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.PARSE_ERROR
    except _VALIDATION_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.VALIDATION_ERROR
    except _SOLVER_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.SOLVER_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return ExitCode.IO_ERROR
