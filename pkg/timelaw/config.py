"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

import json
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple, Union

import typepy

from ._common import to_integer, to_real
from ._constant import RhsVariant, ShootingAnchor, SolveMethod
from .bvp import MIN_SOLVER_CELLS, SolverConfig
from .curve import CurveSpec, make_curve
from .error import (
    ConfigParseError,
    ConfigValidationError,
    CurveError,
    InvalidParameterError,
    NonFiniteValueError,
)
from .oracle import MIN_ORACLE_CELLS, OracleConfig


VARIANT_NAMES: Dict[str, RhsVariant] = {
    "paper": RhsVariant.PAPER_PRINTED,
    "expanded": RhsVariant.EXPANDED_FROM_F_TERMS,
    RhsVariant.PAPER_PRINTED.value: RhsVariant.PAPER_PRINTED,
    RhsVariant.EXPANDED_FROM_F_TERMS.value: RhsVariant.EXPANDED_FROM_F_TERMS,
}

_TOP_KEYS = ("curve", "alpha", "mass", "p0", "p1", "n", "solver", "output")
_SOLVER_KEYS = (
    "method",
    "variant",
    "anchor",
    "newton_tol",
    "max_newton_iters",
    "oracle_n",
    "grad_tol",
    "decrease_tol",
    "max_iters",
    "derivative_tol",
    "max_workers",
)
_OUTPUT_KEYS = ("csv_path", "report_path")


@dataclass(frozen=True)
class RunConfig:
    """
    Validated run configuration of the command line interface.
    """

    curve: CurveSpec
    alphas: Tuple[float, ...]

    #: |True| when ``alpha`` was given as a list
    is_sweep: bool

    mass: float
    p0: float
    p1: float
    n: int = 1000
    method: SolveMethod = SolveMethod.AUTO
    variant: RhsVariant = RhsVariant.EXPANDED_FROM_F_TERMS
    anchor: ShootingAnchor = ShootingAnchor.MIDPOINT
    newton_tol: float = 1e-10
    max_newton_iters: int = 50
    oracle_n: int = 400
    grad_tol: float = 1e-8
    decrease_tol: float = 1e-12
    max_iters: int = 200000
    derivative_tol: float = 1e-5
    max_workers: int = 1
    csv_path: str = "solution.csv"
    report_path: str = "report.json"

    @property
    def alpha(self) -> float:
        return self.alphas[0]

    def solver_config(self, alpha: Optional[float] = None) -> SolverConfig:
        return SolverConfig(
            alpha=self.alpha if alpha is None else alpha,
            mass=self.mass,
            p0=self.p0,
            p1=self.p1,
            n=self.n,
            newton_tol=self.newton_tol,
            max_newton_iters=self.max_newton_iters,
            variant=self.variant,
            anchor=self.anchor,
        )

    def oracle_config(self) -> OracleConfig:
        return OracleConfig(
            n=self.oracle_n,
            grad_tol=self.grad_tol,
            decrease_tol=self.decrease_tol,
            max_iters=self.max_iters,
        )


def _check_keys(section: Mapping[str, Any], allowed: Sequence[str], name: str) -> None:
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigValidationError(
            "unknown keys in {}: {}".format(name, ", ".join(sorted(str(key) for key in unknown)))
        )


def _section(data: Mapping[str, Any], key: str) -> Mapping[str, Any]:
    section = data.get(key, {})
    if not isinstance(section, Mapping):
        raise ConfigValidationError(f"'{key}' must be an object: {section!r}")

    return section


def _real(value: Any, name: str) -> float:
    try:
        return to_real(value, name, ConfigValidationError)
    except NonFiniteValueError as e:
        raise ConfigValidationError(str(e)) from e


def _positive_real(value: Any, name: str) -> float:
    converted = _real(value, name)
    if converted <= 0:
        raise ConfigValidationError(f"{name} must be greater than zero: {value!r}")

    return converted


def _integer(value: Any, name: str, minimum: int) -> int:
    converted = to_integer(value, name, ConfigValidationError)
    if converted < minimum:
        raise ConfigValidationError(f"{name} must be at least {minimum}: {value!r}")

    return converted


def _text(value: Any, name: str) -> str:
    if not isinstance(value, str) or typepy.is_null_string(value):
        raise ConfigValidationError(f"{name} must be a non-empty string: {value!r}")

    return value.strip()


def _choice(value: Any, name: str, choices: Mapping[str, Any]) -> Any:
    key = _text(value, name).lower()
    if key not in choices:
        raise ConfigValidationError(
            "{} must be one of {}: {!r}".format(name, ", ".join(sorted(choices)), value)
        )

    return choices[key]


def to_variant(value: Union[str, RhsVariant]) -> RhsVariant:
    if isinstance(value, RhsVariant):
        return value

    return _choice(value, "variant", VARIANT_NAMES)


def _alphas(value: Any) -> Tuple[Tuple[float, ...], bool]:
    if isinstance(value, (list, tuple)):
        if not value:
            raise ConfigValidationError("alpha list must not be empty")

        alphas = tuple(_positive_real(item, f"alpha[{i}]") for i, item in enumerate(value))
        duplicates = sorted({alpha for alpha in alphas if alphas.count(alpha) > 1})
        if duplicates:
            raise ConfigValidationError(f"alpha list has duplicate values: {duplicates}")

        return (alphas, True)

    return ((_positive_real(value, "alpha"),), False)


def parse_config(data: Any) -> RunConfig:
    """
    Validate a decoded configuration document.

    :raises timelaw.error.ConfigValidationError:
        If a key is unknown or missing, or a value has a wrong type or range.
    """

    if not isinstance(data, Mapping):
        raise ConfigValidationError(f"configuration must be an object: {type(data).__name__}")

    _check_keys(data, _TOP_KEYS, "configuration")
    for key in ("curve", "alpha", "p0", "p1"):
        if key not in data:
            raise ConfigValidationError(f"missing required key: {key}")

    try:
        curve = CurveSpec.from_dict(data["curve"])
        make_curve(curve)
    except (CurveError, NonFiniteValueError) as e:
        raise ConfigValidationError(f"invalid curve: {e}") from e

    alphas, is_sweep = _alphas(data["alpha"])

    solver = _section(data, "solver")
    _check_keys(solver, _SOLVER_KEYS, "solver")
    output = _section(data, "output")
    _check_keys(output, _OUTPUT_KEYS, "output")

    kwargs: Dict[str, Any] = {}
    if "method" in solver:
        kwargs["method"] = _choice(
            solver["method"], "method", {item.value: item for item in SolveMethod}
        )
    if "variant" in solver:
        kwargs["variant"] = to_variant(solver["variant"])
    if "anchor" in solver:
        kwargs["anchor"] = _choice(
            solver["anchor"], "anchor", {item.value: item for item in ShootingAnchor}
        )
    for key in ("newton_tol", "grad_tol", "decrease_tol", "derivative_tol"):
        if key in solver:
            kwargs[key] = _positive_real(solver[key], key)
    for key in ("max_newton_iters", "max_iters", "max_workers"):
        if key in solver:
            kwargs[key] = _integer(solver[key], key, 1)
    if "oracle_n" in solver:
        kwargs["oracle_n"] = _integer(solver["oracle_n"], "oracle_n", MIN_ORACLE_CELLS)
    for key in _OUTPUT_KEYS:
        if key in output:
            kwargs[key] = _text(output[key], key)

    config = RunConfig(
        curve=curve,
        alphas=alphas,
        is_sweep=is_sweep,
        mass=_positive_real(data.get("mass", 1.0), "mass"),
        p0=_real(data["p0"], "p0"),
        p1=_real(data["p1"], "p1"),
        n=_integer(data.get("n", 1000), "n", MIN_SOLVER_CELLS),
        **kwargs,
    )

    # grid parity and the remaining solver ranges
    try:
        config.solver_config()
        config.oracle_config()
    except (InvalidParameterError, NonFiniteValueError) as e:
        raise ConfigValidationError(str(e)) from e

    return config


def load_config(path: str) -> RunConfig:
    """
    Read and validate a JSON configuration file.

    :raises timelaw.error.ConfigParseError:
        If the file cannot be read or is not valid JSON.
    :raises timelaw.error.ConfigValidationError:
        If the document does not describe a valid run.
    """

    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigParseError(f"failed to read configuration: {e}") from e
    except ValueError as e:
        raise ConfigParseError(f"malformed configuration '{path}': {e}") from e

    return parse_config(data)
