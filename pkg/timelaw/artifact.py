"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

import csv
import json
import os
from typing import Any, Dict, List, Mapping, Sequence

import numpy as np

from ._common import to_real
from ._constant import LAW_HEADERS, SERIES_HEADERS, SUMMARY_HEADERS
from ._logger import logger
from .bvp import SolutionReport
from .cost import CostBreakdown, TimeLaw, Trajectory, kinematic_rates
from .curve import CurveModel
from .error import ConfigParseError, NonFiniteValueError


def format_value(value: float) -> str:
    # 17 significant digits round-trip a float64
    return f"{value:.16e}"


def resolve_path(path: str, out_dir: str) -> str:
    if os.path.isabs(path):
        return path

    return os.path.join(out_dir, path)


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def coordinate_series(curve: CurveModel, trajectory: Trajectory) -> Dict[str, np.ndarray]:
    """
    Position, velocity and acceleration of the tool along a trajectory.
    """

    x_derivs, y_derivs = curve.derivatives(trajectory.z0)
    vx, vy, ax, ay, _, _ = kinematic_rates(x_derivs, y_derivs, trajectory.z1, trajectory.z2, 0.0)

    return {"x": x_derivs[0], "y": y_derivs[0], "vx": vx, "vy": vy, "ax": ax, "ay": ay}


def max_abs_accel(curve: CurveModel, trajectory: Trajectory) -> float:
    series = coordinate_series(curve, trajectory)

    return float(np.max(np.hypot(series["ax"], series["ay"])))


def series_rows(curve: CurveModel, report: SolutionReport) -> List[List[str]]:
    trajectory = report.trajectory
    n = trajectory.n
    series = coordinate_series(curve, trajectory)
    residuals = report.el_residuals

    rows = []
    for i, t in enumerate(trajectory.t):
        row = [format_value(t)]
        row.extend(format_value(value) for value in trajectory.states[i])
        row.extend(
            format_value(series[key][i]) for key in ("x", "y", "vx", "vy", "ax", "ay")
        )
        row.append(format_value(residuals[i - 2]) if 2 <= i <= n - 2 else "")
        rows.append(row)

    return rows


def _write_csv(path: str, headers: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows(rows)

    logger.info(f"written: {path}")


def write_series_csv(path: str, curve: CurveModel, report: SolutionReport) -> None:
    _write_csv(path, SERIES_HEADERS, series_rows(curve, report))


def write_summary_csv(path: str, entries: Sequence[Mapping[str, float]]) -> None:
    rows = [
        [format_value(entry[key]) for key in SUMMARY_HEADERS]
        for entry in sorted(entries, key=lambda entry: entry["alpha"])
    ]
    _write_csv(path, SUMMARY_HEADERS, rows)


def summary_entry(alpha: float, curve: CurveModel, report: SolutionReport) -> Dict[str, float]:
    return {
        "alpha": alpha,
        "J_total": report.cost.total,
        "J_kinetic": report.cost.kinetic,
        "inertia_measure": report.cost.inertia_measure,
        "max_abs_accel": max_abs_accel(curve, report.trajectory),
    }


def cost_dict(cost: CostBreakdown) -> Dict[str, float]:
    return {
        "J_total": cost.total,
        "J_kinetic": cost.kinetic,
        "inertia_measure": cost.inertia_measure,
    }


def report_dict(report: SolutionReport) -> Dict[str, Any]:
    result: Dict[str, Any] = cost_dict(report.cost)
    result.update(
        {
            "bc_residual": report.bc_residual,
            "el_residual_rms": report.el_residual_rms,
            "iterations": report.iterations,
            "converged": report.converged,
            "variant": report.variant.value,
        }
    )

    return result


def write_json(path: str, data: Mapping[str, Any]) -> None:
    _ensure_parent(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")

    logger.info(f"written: {path}")


def write_law_csv(path: str, law: TimeLaw) -> None:
    _write_csv(
        path,
        LAW_HEADERS,
        [[format_value(t), format_value(p)] for t, p in zip(law.t, law.p_values)],
    )


def read_law_csv(path: str) -> TimeLaw:
    """
    Read a time law written with the ``t,p`` header.

    :raises OSError: If the file cannot be read.
    :raises timelaw.error.ConfigParseError: If the content is malformed.
    """

    with open(path, encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))

    if not rows or [header.strip() for header in rows[0]] != list(LAW_HEADERS):
        raise ConfigParseError(
            "law file header must be '{}': {}".format(",".join(LAW_HEADERS), path)
        )

    values = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(LAW_HEADERS):
            raise ConfigParseError(f"malformed row at {path}:{line_no}: {row}")
        try:
            values.append(to_real(row[1], "p", ConfigParseError))
        except NonFiniteValueError as e:
            raise ConfigParseError(f"{path}:{line_no}: {e}") from e

    return TimeLaw(values)
