"""
.. codeauthor:: Tsuyoshi Hombashi <tsuyoshi.hombashi@gmail.com>
"""

import json

import pytest

from timelaw import CurveKind, RhsVariant, ShootingAnchor, SolveMethod
from timelaw.config import load_config, parse_config, to_variant
from timelaw.error import ConfigParseError, ConfigValidationError


def base_config(**kwargs):
    data = {"curve": {"kind": "circle", "params": {"R": 1}}, "alpha": 0.01, "p0": 0, "p1": 3.14}
    data.update(kwargs)

    return data


class Test_parse_config:
    def test_normal_defaults(self):
        config = parse_config(base_config())

        assert config.curve.kind == CurveKind.CIRCLE
        assert config.alphas == (0.01,)
        assert config.alpha == 0.01
        assert not config.is_sweep
        assert config.mass == 1.0
        assert config.n == 1000
        assert config.method == SolveMethod.AUTO
        assert config.variant == RhsVariant.EXPANDED_FROM_F_TERMS
        assert config.anchor == ShootingAnchor.MIDPOINT
        assert config.oracle_n == 400
        assert config.max_workers == 1
        assert config.csv_path == "solution.csv"
        assert config.report_path == "report.json"

    def test_normal_solver_section(self):
        config = parse_config(
            base_config(
                alpha=[0.1, 0.01],
                mass=2,
                n=200,
                solver={
                    "method": "oracle",
                    "variant": "paper",
                    "anchor": "start",
                    "newton_tol": 1e-9,
                    "decrease_tol": 1e-10,
                    "oracle_n": 200,
                    "max_workers": 2,
                },
                output={"csv_path": "out.csv"},
            )
        )

        assert config.alphas == (0.1, 0.01)
        assert config.is_sweep
        assert config.method == SolveMethod.ORACLE
        assert config.variant == RhsVariant.PAPER_PRINTED
        assert config.anchor == ShootingAnchor.START
        assert config.oracle_config().n == 200
        assert config.oracle_config().decrease_tol == 1e-10
        assert config.csv_path == "out.csv"

        solver_config = config.solver_config(0.01)
        assert solver_config.alpha == 0.01
        assert solver_config.am == 0.02
        assert solver_config.n == 200
        assert solver_config.newton_tol == 1e-9

    @pytest.mark.parametrize(
        ["kwargs"],
        [
            [{"alpha": 0}],
            [{"alpha": -0.1}],
            [{"alpha": []}],
            [{"alpha": [0.1, "x"]}],
            [{"alpha": [0.1, 0.01, 0.1]}],
            [{"alpha": "nan"}],
            [{"mass": 0}],
            [{"p1": "inf"}],
            [{"n": 99}],
            [{"n": 1001}],
            [{"n": 200.5}],
            [{"curve": {"kind": "circle", "params": {"R": 0}}}],
            [{"curve": {"kind": "spiral"}}],
            [{"solver": {"method": "newton"}}],
            [{"solver": {"variant": "printed"}}],
            [{"solver": {"oracle_n": 100}}],
            [{"solver": {"decrease_tol": 0}}],
            [{"solver": {"oracle_n": 401}}],
            [{"solver": {"max_workers": 0}}],
            [{"solver": {"unknown": 1}}],
            [{"solver": [1]}],
            [{"output": {"csv_path": ""}}],
            [{"extra": True}],
        ],
    )
    def test_exception(self, kwargs):
        with pytest.raises(ConfigValidationError):
            parse_config(base_config(**kwargs))

    @pytest.mark.parametrize(["key"], [["curve"], ["alpha"], ["p0"], ["p1"]])
    def test_exception_missing(self, key):
        data = base_config()
        del data[key]

        with pytest.raises(ConfigValidationError, match=key):
            parse_config(data)

    @pytest.mark.parametrize(["value"], [[None], [[1, 2]], ["{}"]])
    def test_exception_not_object(self, value):
        with pytest.raises(ConfigValidationError):
            parse_config(value)


class Test_to_variant:
    @pytest.mark.parametrize(
        ["value", "expected"],
        [
            ["paper", RhsVariant.PAPER_PRINTED],
            [" Expanded ", RhsVariant.EXPANDED_FROM_F_TERMS],
            [RhsVariant.PAPER_PRINTED.value, RhsVariant.PAPER_PRINTED],
            [RhsVariant.EXPANDED_FROM_F_TERMS, RhsVariant.EXPANDED_FROM_F_TERMS],
        ],
    )
    def test_normal(self, value, expected):
        assert to_variant(value) == expected

    @pytest.mark.parametrize(["value"], [[""], ["default"], [None], [1]])
    def test_exception(self, value):
        with pytest.raises(ConfigValidationError):
            to_variant(value)


class Test_load_config:
    def test_normal(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(base_config(alpha=0.1)))

        assert load_config(str(path)).alpha == 0.1

    def test_exception_missing_file(self, tmp_path):
        with pytest.raises(ConfigParseError):
            load_config(str(tmp_path / "missing.json"))

    def test_exception_malformed(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"curve": ')

        with pytest.raises(ConfigParseError):
            load_config(str(path))

    def test_exception_invalid(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps(base_config(alpha=0)))

        with pytest.raises(ConfigValidationError):
            load_config(str(path))
