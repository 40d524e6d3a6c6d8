"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

from .__version__ import __author__, __copyright__, __email__, __license__, __version__
from ._constant import CurveKind, RhsVariant, ShootingAnchor, SolveMethod, SolvePath
from ._logger import set_logger
from .bvp import (
    SolutionReport,
    SolverConfig,
    continuation,
    initial_guess,
    integrate_ivp,
    quintic_law,
    shoot,
    smoothstep_law,
    solution_from_law,
    solve,
)
from .cost import (
    CostBreakdown,
    FTerms,
    GradientCheck,
    Kinematics,
    StateVector,
    TimeLaw,
    Trajectory,
    chain_kinematics,
    check_gradient,
    discrete_cost,
    discrete_gradient,
    el_residual,
    evaluate_cost,
    evaluate_state_cost,
    f_terms,
    law_states,
)
from .curve import (
    CurveModel,
    CurveSpec,
    DerivativeCheck,
    DerivativeTable,
    GeometricCoefficients,
    ValidationReport,
    eval_derivatives,
    geometric_coefficients,
    make_curve,
    regular_coefficients,
    validate_derivatives,
)
from .error import (
    ConfigError,
    ConfigParseError,
    ConfigValidationError,
    CurveError,
    DegenerateCurveError,
    DegenerateSolutionError,
    GridError,
    IntegrationError,
    InvalidParameterError,
    NonConvergenceError,
    NonFiniteValueError,
    SingularParameterizationError,
)
from .ode import LineLaw, delta_forms, line_analytic, printed_special_rhs, rhs
from .oracle import OracleConfig, OracleResult, discretize_cost, oracle_minimize
