"""半径函数的单元测试"""

import math

import numpy as np
import pandas as pd
import pytest

from canal4d.exceptions import InvalidSpec, IoError, NonpositiveRadius
from canal4d.geometry.radius import RadiusFunction, read_radius_csv


class TestEvaluate:
    @pytest.mark.parametrize(
        "rad, u, expected",
        [
            (RadiusFunction.constant(1.5), 3.0, (1.5, 0.0, 0.0)),
            (RadiusFunction.linear(2, 6), 1.0, (8.0, 2.0, 0.0)),
            (RadiusFunction.quadratic(), 3.0, (9.0, 6.0, 2.0)),
            (RadiusFunction.quadratic(1, 0, 1), 2.0, (5.0, 4.0, 2.0)),
            (RadiusFunction.cos_sq(), 0.0, (1.0, 0.0, 0.0)),
            (RadiusFunction.cosh_scaled(1, 0), 0.0, (1.0, 0.0, 1.0)),
            (RadiusFunction.sine(2, 0.3), 0.0, (2.0, 0.3, 0.0)),
        ],
    )
    def test_catalog(self, rad, u, expected):
        assert rad.evaluate(u) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize(
        "rad",
        [
            RadiusFunction.cos_sq(),
            RadiusFunction.cosh_scaled(0.7, 0.2),
            RadiusFunction.sine(2, 0.3, 1.7, 0.4),
            RadiusFunction.quadratic(0.5, -1, 3),
        ],
    )
    def test_derivatives_match_finite_differences(self, rad):
        u, h = 0.6, 1e-5
        r, dr, ddr = rad.evaluate(u)
        assert (rad(u + h) - rad(u - h)) / (2 * h) == pytest.approx(dr, abs=1e-8)
        assert (rad.evaluate(u + h)[1] - rad.evaluate(u - h)[1]) / (2 * h) == pytest.approx(ddr, abs=1e-8)

    def test_sampled_reproduces_cubic(self):
        us = np.linspace(0.0, 2.0, 9)
        rad = RadiusFunction.sampled(us, us**3 + 1.0)
        r, dr, ddr = rad.evaluate(1.3)
        assert r == pytest.approx(1.3**3 + 1.0, abs=1e-12)
        assert dr == pytest.approx(3 * 1.3**2, abs=1e-11)
        assert ddr == pytest.approx(6 * 1.3, abs=1e-10)


class TestValidation:
    def test_unknown_kind(self):
        with pytest.raises(InvalidSpec):
            RadiusFunction("exponential", {})

    def test_missing_parameter(self):
        with pytest.raises(InvalidSpec):
            RadiusFunction("linear", {"a": 1.0})

    def test_cosh_needs_positive_scale(self):
        with pytest.raises(InvalidSpec):
            RadiusFunction.cosh_scaled(0.0, 1.0)

    def test_sampled_needs_increasing_u(self):
        with pytest.raises(InvalidSpec):
            RadiusFunction.sampled([0, 2, 1, 3], [1, 1, 1, 1])

    def test_check_positive_reports_location(self):
        rad = RadiusFunction.cos_sq()
        us = np.linspace(0.0, 2.0, 21)
        with pytest.raises(NonpositiveRadius) as exc:
            rad.check_positive(us)
        # cos(u²) 在 u = √(π/2) ≈ 1.2533 处过零
        assert exc.value.u == pytest.approx(1.3)

    def test_check_positive_passes(self):
        RadiusFunction.linear(2, 6).check_positive(np.linspace(0, 2 * math.pi, 50))


class TestIsConstant:
    @pytest.mark.parametrize(
        "rad, expected",
        [
            (RadiusFunction.constant(1.0), True),
            (RadiusFunction.linear(0, 3), True),
            (RadiusFunction.linear(2, 6), False),
            (RadiusFunction.quadratic(0, 0, 2), True),
            (RadiusFunction.sine(2, 0), True),
            (RadiusFunction.cos_sq(), False),
        ],
    )
    def test_is_constant(self, rad, expected):
        assert rad.is_constant is expected

    @pytest.mark.parametrize(
        "rad, expected",
        [
            (RadiusFunction.constant(1.0), True),
            (RadiusFunction.linear(2, 6), True),
            (RadiusFunction.quadratic(0, 2, 6), True),
            (RadiusFunction.quadratic(1, 0, 0), False),
            (RadiusFunction.sampled([0, 1, 2, 3], [6, 8, 10, 12]), True),
            (RadiusFunction.sampled([0, 1, 2, 3], [0, 1, 4, 9]), False),
            (RadiusFunction.sine(2, 0.3), False),
            (RadiusFunction.cosh_scaled(1, 0), False),
        ],
    )
    def test_is_linear(self, rad, expected):
        assert rad.is_linear is expected


class TestDescribe:
    def test_describe(self):
        assert RadiusFunction.linear(2, 6).describe() == "r=2u+6"
        assert RadiusFunction.cos_sq().describe() == "r=cos(u²)"

    def test_to_dict(self):
        data = RadiusFunction.sampled([0, 1, 2, 3], [1, 2, 3, 4]).to_dict()
        assert data == {"kind": "sampled", "u": [0.0, 1.0, 2.0, 3.0], "r": [1.0, 2.0, 3.0, 4.0]}


class TestRadiusCsv:
    def test_read(self, tmp_path):
        path = tmp_path / "radius.csv"
        us = np.linspace(0, 1, 6)
        pd.DataFrame({"u": us, "r": 1.0 + us}).to_csv(path, index=False)
        rad = read_radius_csv(str(path))
        assert rad.kind == "sampled"
        assert rad.evaluate(0.5) == pytest.approx((1.5, 1.0, 0.0), abs=1e-12)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoError):
            read_radius_csv(str(tmp_path / "none.csv"))

    def test_missing_column(self, tmp_path):
        path = tmp_path / "radius.csv"
        pd.DataFrame({"u": [0, 1, 2, 3]}).to_csv(path, index=False)
        with pytest.raises(InvalidSpec):
            read_radius_csv(str(path))
