"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

import math

import numpy as np
import pytest

import timelaw.cost as cost_module
from timelaw import (
    CostBreakdown,
    CurveKind,
    CurveSpec,
    StateVector,
    TimeLaw,
    Trajectory,
    chain_kinematics,
    check_gradient,
    discrete_cost,
    discrete_gradient,
    el_residual,
    eval_derivatives,
    evaluate_cost,
    evaluate_state_cost,
    f_terms,
    law_states,
    line_analytic,
    make_curve,
    quintic_law,
    smoothstep_law,
)
from timelaw.cost import enforce_rest_nodes, smoothstep_states
from timelaw.error import (
    GridError,
    InvalidParameterError,
    NonFiniteValueError,
    SingularParameterizationError,
)


GRADIENT_CURVES = [
    ["line", {"k": -2, "b": 1}, 0.0, 1.0],
    ["parabola", {"k": 0.5}, -1.0, 1.0],
    ["circle", {"R": 1}, 0.0, math.pi],
    ["ellipse", {"a": 1, "b": 2}, 0.0, 2 * math.pi],
    ["polynomial", {"x": [0, 1], "y": [0, 0, 0, 1]}, 0.0, 1.0],
]


def curve_of(kind: str, **params):
    return make_curve(CurveSpec(CurveKind(kind), params))


class Test_CostBreakdown:
    @pytest.mark.parametrize(
        ["kinetic", "inertia", "alpha", "mass", "expected"],
        [
            [0.6, 12.0, 0.01, 1.0, 0.66],
            [0.6, 12.0, 0.5, 2.0, 12.6],
            [0.0, 0.0, 1.0, 1.0, 0.0],
        ],
    )
    def test_normal(self, kinetic, inertia, alpha, mass, expected):
        cost = CostBreakdown.from_parts(kinetic, inertia, alpha, mass)

        assert cost.kinetic == kinetic
        assert cost.inertia_measure == inertia
        assert cost.total == pytest.approx(expected)


class Test_TimeLaw:
    def test_normal(self):
        law = TimeLaw([0, 1, 2, 3, 4])

        assert law.n == 4
        assert law.h == 0.25
        assert list(law.t) == [0, 0.25, 0.5, 0.75, 1]
        assert len(law) == 5
        with pytest.raises(ValueError):
            law.p_values[0] = 1.0

    def test_normal_from_function(self):
        law = TimeLaw.from_function(lambda t: 2 * t, 10)

        assert list(law.p_values) == pytest.approx(list(np.linspace(0, 2, 11)))

    @pytest.mark.parametrize(
        ["value", "expected"],
        [
            [[0, 1, 2], GridError],
            [[0, 1, 2, 3, 4, 5], GridError],
            [[[0, 1], [2, 3]], GridError],
            [[0, 1, math.nan, 3, 4], NonFiniteValueError],
            [[0, 1, 2, 3, math.inf], NonFiniteValueError],
        ],
    )
    def test_exception(self, value, expected):
        with pytest.raises(expected):
            TimeLaw(value)


class Test_Trajectory:
    def test_normal(self):
        trajectory = Trajectory(smoothstep_states(0.0, 2.0, np.linspace(0, 1, 5)))

        assert trajectory.n == 4
        assert trajectory[0] == StateVector(0.0, 0.0, 12.0, -24.0)
        assert trajectory[-1] == StateVector(2.0, 0.0, -12.0, -24.0)
        assert list(trajectory.law.p_values) == list(trajectory.z0)

    @pytest.mark.parametrize(
        ["value", "expected"],
        [
            [np.zeros((5, 3)), GridError],
            [np.zeros((1, 4)), GridError],
            [np.full((5, 4), math.nan), NonFiniteValueError],
        ],
    )
    def test_exception(self, value, expected):
        with pytest.raises(expected):
            Trajectory(value)


class Test_candidate_laws:
    @pytest.mark.parametrize(["func"], [[smoothstep_law], [quintic_law]])
    @pytest.mark.parametrize(["p0", "p1"], [[0.0, 1.0], [1.0, -2.0], [0.5, 0.5]])
    def test_normal(self, func, p0, p1):
        law = func(p0, p1, 100)

        assert law.p_values[0] == p0
        assert law.p_values[-1] == pytest.approx(p1)
        assert law.p_values[50] == pytest.approx(0.5 * (p0 + p1))

    def test_normal_smoothstep_states(self):
        states = smoothstep_states(1.0, 3.0, np.array([0.0, 0.5, 1.0]))

        assert states.shape == (3, 4)
        assert list(states[1]) == pytest.approx([2.0, 3.0, 0.0, -24.0])


class Test_chain_kinematics:
    def test_normal_circle(self):
        table = eval_derivatives(curve_of("circle", R=1), 0.0)
        kinematics = chain_kinematics(table, StateVector(0.0, 2.0, 3.0, 0.0))

        assert kinematics[:4] == (0.0, 2.0, -4.0, 3.0)
        assert kinematics.x_dddot == -18.0
        assert kinematics.y_dddot == -8.0
        assert kinematics.x_ddddot is None

    def test_normal_fourth_order(self):
        table = eval_derivatives(curve_of("circle", R=1), 0.0)
        kinematics = chain_kinematics(table, StateVector(0.0, 2.0, 3.0, 0.0), z3_dot=1.0)

        assert kinematics.x_ddddot == -11.0
        assert kinematics.y_ddddot == -71.0

    def test_normal_line(self):
        table = eval_derivatives(curve_of("line", k=-2, b=1), 0.3)
        kinematics = chain_kinematics(table, StateVector(0.3, 1.5, -2.0, 4.0))

        assert tuple(kinematics[:6]) == pytest.approx((1.5, -3.0, -2.0, 4.0, 4.0, -8.0))


class Test_f_terms:
    @pytest.mark.parametrize(
        ["z", "alpha", "mass", "expected"],
        [
            [StateVector(0.0, 2.0, 3.0, 0.0), 0.5, 2.0, (0.0, 4.0, 6.0)],
            [StateVector(5.0, 1.0, 0.0, 0.0), 1.0, 1.0, (0.0, 1.0, 0.0)],
        ],
    )
    def test_normal_line(self, z, alpha, mass, expected):
        assert tuple(f_terms(curve_of("line", k=0), z, alpha, mass)) == pytest.approx(expected)

    def test_normal_circle(self):
        # R = 1, p = 0: x' = 0, y' = 1, x'' = -1, y'' = 0, x''' = 0, y''' = -1
        terms = f_terms(curve_of("circle", R=1), StateVector(0.0, 2.0, 3.0, 0.0), 1.0, 1.0)

        # x_dot = 0, y_dot = 2, x_ddot = -4, y_ddot = 3
        assert terms.f1 == pytest.approx(-3.0 * 4.0 + 4.0 * 3.0, abs=1e-12)
        assert terms.f2 == pytest.approx(2.0 + 2.0 * 4.0 * 2.0)
        assert terms.f3 == pytest.approx(3.0)


class Test_evaluate_cost:
    @pytest.mark.parametrize(
        ["alpha", "mass"],
        [[0.01, 1.0], [0.1, 1.0], [0.05, 3.0]],
    )
    def test_normal_smoothstep_line(self, alpha, mass):
        law = smoothstep_law(0.0, 1.0, 1000)
        cost = evaluate_cost(curve_of("line", k=0), law, alpha, mass)

        assert cost.kinetic == pytest.approx(0.6 * mass, rel=1e-5)
        assert cost.inertia_measure == pytest.approx(12.0, rel=1e-5)
        assert cost.total == pytest.approx(0.6 * mass + 6.0 * alpha * mass**2, rel=1e-5)

    def test_normal_scaled_by_speed(self):
        # x'^2 + y'^2 = R^2 on the circle
        law = smoothstep_law(0.0, 1.0, 1000)
        cost = evaluate_cost(curve_of("circle", R=2), law, 0.01, 1.0)

        assert cost.kinetic == pytest.approx(2.4, rel=1e-5)

    @pytest.mark.parametrize(
        ["kind", "params"], [["line", {"k": -2, "b": 1}], ["circle", {"R": 2}]]
    )
    def test_normal_reversed(self, kind, params):
        curve = curve_of(kind, **params)
        law = quintic_law(0.3, 1.7, 400)
        reversed_law = TimeLaw(law.p_values[::-1])

        assert evaluate_cost(curve, reversed_law, 0.01, 1.0).total == pytest.approx(
            evaluate_cost(curve, law, 0.01, 1.0).total, rel=1e-12
        )

    def test_normal_mass_scaling(self):
        curve = curve_of("ellipse", a=1, b=2)
        law = smoothstep_law(0.0, 2.0, 400)
        light = evaluate_cost(curve, law, 0.01, 1.0)
        heavy = evaluate_cost(curve, law, 0.02, 3.0)

        assert heavy.kinetic == pytest.approx(3.0 * light.kinetic, rel=1e-12)
        assert heavy.inertia_measure == light.inertia_measure
        assert heavy.total == pytest.approx(
            3.0 * light.kinetic + 0.5 * 0.02 * 9.0 * light.inertia_measure, rel=1e-12
        )

    def test_normal_constant_law(self):
        law = TimeLaw(np.full(101, 0.5))
        cost = evaluate_cost(curve_of("ellipse", a=1, b=2), law, 0.01, 1.0)

        assert cost.total == 0.0

    @pytest.mark.parametrize(["alpha", "mass"], [[0.0, 1.0], [-0.1, 1.0], [0.1, 0.0]])
    def test_exception(self, alpha, mass):
        with pytest.raises(InvalidParameterError):
            evaluate_cost(curve_of("line", k=0), smoothstep_law(0.0, 1.0, 10), alpha, mass)

    def test_exception_singular(self):
        curve = curve_of("polynomial", x=[0, 0, 1], y=[0])

        with pytest.raises(SingularParameterizationError):
            evaluate_cost(curve, smoothstep_law(-1.0, 1.0, 10), 0.01, 1.0)


class Test_evaluate_state_cost:
    def test_normal(self):
        n = 1000
        trajectory = Trajectory(smoothstep_states(0.0, 1.0, np.linspace(0, 1, n + 1)))
        cost = evaluate_state_cost(curve_of("line", k=0), trajectory, 0.01, 1.0)

        assert cost.kinetic == pytest.approx(0.6, rel=1e-10)
        assert cost.inertia_measure == pytest.approx(12.0, rel=1e-10)

    def test_normal_agrees_with_differencing(self):
        curve = curve_of("ellipse", a=1, b=2)
        law = quintic_law(0.0, 2.0, 2000)
        state_cost = evaluate_state_cost(curve, law_states(law), 0.01, 1.0)

        assert state_cost.total == pytest.approx(evaluate_cost(curve, law, 0.01, 1.0).total)

    def test_exception(self):
        with pytest.raises(GridError):
            evaluate_state_cost(curve_of("line", k=0), np.zeros((4, 4)), 0.01, 1.0)


class Test_el_residual:
    @pytest.mark.parametrize(["alpha"], [[0.01], [0.1], [1.0]])
    def test_normal_line_closed_form(self, alpha):
        trajectory = line_analytic(0.0, 1.0, alpha, 1.0).trajectory(2000)
        residual = el_residual(curve_of("line", k=-2, b=1), trajectory, alpha, 1.0)

        assert residual.shape == (1997,)
        assert float(np.sqrt(np.mean(residual**2))) < 1e-4

    def test_normal_not_stationary(self):
        trajectory = law_states(smoothstep_law(0.0, 1.0, 1000))
        residual = el_residual(curve_of("line", k=0), trajectory, 0.01, 1.0)

        # -m p_ddot + alpha m^2 p'''' = -m (6 - 12 t) for the smoothstep
        assert residual[498] == pytest.approx(-6.0 + 12.0 * 0.5, abs=1e-6)
        assert residual[0] == pytest.approx(-6.0 + 12.0 * 0.002, abs=1e-3)

    def test_normal_not_stationary_circle(self):
        trajectory = law_states(smoothstep_law(0.0, math.pi, 1000))
        residual = el_residual(curve_of("circle", R=1), trajectory, 0.01, 1.0)

        assert np.max(np.abs(residual)) > 0.1

    def test_exception(self):
        trajectory = law_states(smoothstep_law(0.0, 1.0, 6))

        with pytest.raises(GridError):
            el_residual(curve_of("line", k=0), trajectory, 0.01, 1.0)


class Test_enforce_rest_nodes:
    def test_normal(self):
        p = enforce_rest_nodes([0.0, 9.0, 4.0, 9.0, 8.0])

        assert list(p) == [0.0, 1.0, 4.0, 7.0, 8.0]

    def test_normal_zero_end_velocity(self):
        p = enforce_rest_nodes(np.linspace(0, 1, 11) ** 3)
        h = 0.1

        assert (-3 * p[0] + 4 * p[1] - p[2]) / (2 * h) == pytest.approx(0.0, abs=1e-14)
        assert (3 * p[-1] - 4 * p[-2] + p[-3]) / (2 * h) == pytest.approx(0.0, abs=1e-14)


class Test_discrete_cost:
    def test_normal(self):
        cost, gradient = discrete_cost(
            curve_of("line", k=0), smoothstep_law(0.0, 1.0, 400).p_values, 0.01, 1.0
        )

        assert cost == pytest.approx(0.66, rel=1e-3)
        assert gradient.shape == (397,)

    def test_normal_ignores_supplied_rest_nodes(self):
        curve = curve_of("circle", R=1)
        p = smoothstep_law(0.0, 1.0, 20).p_values.copy()
        moved = p.copy()
        moved[1] += 0.1
        moved[-2] -= 0.1

        assert discrete_cost(curve, p, 0.01, 1.0)[0] == discrete_cost(curve, moved, 0.01, 1.0)[0]

    @pytest.mark.parametrize(
        ["p_values", "expected"],
        [
            [[0.0, 0.5, 1.0], GridError],
            [[0.0, 0.1, 0.5, 0.9, 1.0, 1.0], GridError],
            [[0.0, 0.1, math.nan, 0.9, 1.0], NonFiniteValueError],
        ],
    )
    def test_exception(self, p_values, expected):
        with pytest.raises(expected):
            discrete_cost(curve_of("line", k=0), p_values, 0.01, 1.0)


class Test_discrete_gradient:
    @pytest.mark.parametrize(["kind", "params", "p0", "p1"], GRADIENT_CURVES)
    def test_normal_random_laws(self, kind, params, p0, p1):
        curve = curve_of(kind, **params)
        rng = np.random.default_rng(0)
        base = smoothstep_law(p0, p1, 20).p_values

        for _ in range(10):
            perturbed = base + 0.01 * (p1 - p0) * rng.standard_normal(len(base))
            perturbed[0] = p0
            perturbed[-1] = p1
            check = check_gradient(curve, TimeLaw(perturbed), 0.01, 1.0)

            assert check.passed, check

    def test_normal_matches_central_differences(self):
        curve = curve_of("ellipse", a=1, b=2)
        law = quintic_law(0.0, 1.0, 20)
        gradient = discrete_gradient(curve, law, 0.05, 2.0)
        p = enforce_rest_nodes(law.p_values)
        step = 1e-6

        for i, node in enumerate(range(2, 19)):
            plus = p.copy()
            minus = p.copy()
            plus[node] += step
            minus[node] -= step
            estimate = (
                discrete_cost(curve, plus, 0.05, 2.0)[0] - discrete_cost(curve, minus, 0.05, 2.0)[0]
            ) / (2 * step)

            assert gradient[i] == pytest.approx(estimate, rel=1e-6, abs=1e-6)

    def test_normal_constant_law(self):
        law = TimeLaw(np.full(21, 1.5))
        gradient = discrete_gradient(curve_of("ellipse", a=1, b=2), law, 0.01, 1.0)

        assert list(gradient) == [0.0] * 17

    def test_normal_kinetic_only(self):
        # negligible alpha leaves the discrete kinetic energy
        curve = curve_of("circle", R=2)
        law = smoothstep_law(0.0, 1.0, 20)
        p = enforce_rest_nodes(law.p_values)
        h = 1.0 / 20
        extended = np.concatenate([[p[1]], p, [p[-2]]])
        p_dot = (extended[2:] - extended[:-2]) / (2 * h)
        weights = np.full(21, h)
        weights[0] = weights[-1] = h / 2
        kinetic = float(np.sum(weights * 0.5 * 4.0 * p_dot**2))

        assert discrete_cost(curve, law.p_values, 1e-30, 1.0)[0] == pytest.approx(kinetic)


class Test_check_gradient:
    def test_normal(self):
        check = check_gradient(
            curve_of("circle", R=1), smoothstep_law(0.0, math.pi, 20), 0.01, 1.0
        )

        assert check.passed
        assert check.max_error < 1e-6

    def test_normal_small_components(self):
        check = check_gradient(
            curve_of("circle", R=1), smoothstep_law(0.0, math.pi, 20), 0.01, 1e-3
        )

        assert check.passed, check

    def test_normal_constant_law(self):
        check = check_gradient(curve_of("ellipse", a=1, b=2), TimeLaw(np.full(21, 1.5)), 0.01, 1.0)

        assert check.passed, check

    def test_abnormal_scaled_gradient(self, monkeypatch):
        exact = cost_module.discrete_gradient
        monkeypatch.setattr(cost_module, "discrete_gradient", lambda *args: 1.001 * exact(*args))

        check = check_gradient(
            curve_of("circle", R=1), smoothstep_law(0.0, math.pi, 20), 0.01, 1e-3
        )

        assert not check.passed
        assert check.max_error == pytest.approx(1e-3, rel=1e-2)
