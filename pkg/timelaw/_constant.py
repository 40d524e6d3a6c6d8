"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

import enum


#: Evaluations with ``x'^2 + y'^2`` below this value are treated as singular.
REGULARITY_THRESHOLD = 1e-12

SERIES_HEADERS = (
    "t",
    "p",
    "dp",
    "ddp",
    "dddp",
    "x",
    "y",
    "vx",
    "vy",
    "ax",
    "ay",
    "el_residual",
)
SUMMARY_HEADERS = ("alpha", "J_total", "J_kinetic", "inertia_measure", "max_abs_accel")
LAW_HEADERS = ("t", "p")


@enum.unique
class CurveKind(enum.Enum):
    LINE = "line"
    CIRCLE = "circle"
    PARABOLA = "parabola"
    ELLIPSE = "ellipse"
    POLYNOMIAL = "polynomial"


@enum.unique
class RhsVariant(enum.Enum):
    """
    Coefficient of the ``z1^4`` term of the reduced system.

    - ``PAPER_PRINTED``: ``V + 4U``
    - ``EXPANDED_FROM_F_TERMS``: ``V``, the coefficient obtained by expanding the
      stationarity equation from the f-terms
    """

    PAPER_PRINTED = "paper_printed"
    EXPANDED_FROM_F_TERMS = "expanded_from_f_terms"


@enum.unique
class ShootingAnchor(enum.Enum):
    START = "start"
    MIDPOINT = "midpoint"


@enum.unique
class SolveMethod(enum.Enum):
    AUTO = "auto"
    SHOOT = "shoot"
    ORACLE = "oracle"


@enum.unique
class SolvePath(enum.Enum):
    SHOOT = "shoot"
    CONTINUATION = "continuation"
    ORACLE_RESEED = "oracle_reseed"
    ORACLE = "oracle"


@enum.unique
class ExitCode(enum.IntEnum):
    SUCCESS = 0
    PARSE_ERROR = 3
    VALIDATION_ERROR = 4
    SOLVER_ERROR = 5
    IO_ERROR = 6


DEFAULT_VARIANT = RhsVariant.EXPANDED_FROM_F_TERMS
