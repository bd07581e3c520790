"""检验套件的测试"""

import json
import math

import pytest

from canal4d.analysis.suites import SUITES, CheckResult, SuiteContext, run_suite
from canal4d.analysis.theorems import MinimalRadiusParams, minimal_radius
from canal4d.exceptions import InvalidParameter, WrongMode
from canal4d.geometry.canal import surface_jet
from canal4d.geometry.radius import RadiusFunction
from canal4d.meshio.sampling import GridSpec

GRID = GridSpec(10, 12, (0.0, 2.0))


def checks(results):
    return {r.check: r for r in results}


class TestCheckResult:
    def test_against_pass(self):
        result = CheckResult.against("x", 1e-13, 1e-12, nu=3)
        assert result.passed is True
        assert result.to_dict() == {
            "check": "x",
            "params": {"nu": 3},
            "max_residual": 1e-13,
            "tolerance": 1e-12,
            "pass": True,
        }

    def test_against_fail(self):
        result = CheckResult.against("x", 1e-3, 1e-12)
        assert result.failed

    def test_nan_never_passes(self):
        result = CheckResult.against("x", math.nan, 1.0)
        assert result.passed is False
        assert result.to_dict()["max_residual"] is None
        json.dumps(result.to_dict(), allow_nan=False)

    def test_informational(self):
        result = CheckResult("x", 0.5)
        assert result.to_dict()["pass"] is None
        assert not result.failed


class TestSuites:
    def test_registry(self):
        assert set(SUITES) == {"equivalence", "weingarten", "flat", "minimal", "linear-weingarten"}

    def test_unknown_suite(self, straight_framed):
        ctx = SuiteContext(straight_framed, RadiusFunction.constant(1.0), GRID)
        with pytest.raises(InvalidParameter):
            run_suite("curvature", ctx)

    def test_equivalence_on_straight_tube(self, straight_framed):
        ctx = SuiteContext(straight_framed, RadiusFunction.constant(1.0), GRID)
        results = checks(run_suite("equivalence", ctx))
        assert set(results) == {"equivalence.K", "equivalence.Hvec", "collapse.tube", "collapse.straight"}
        assert all(r.passed for r in results.values())
        assert results["equivalence.K"].params["points"] == GRID.size

    def test_equivalence_on_example_canal(self, torus_framed_coarse):
        ctx = SuiteContext(torus_framed_coarse, RadiusFunction.sine(2.0, 0.3), GridSpec(6, 6, (0.5, 5.5)))
        results = checks(run_suite("equivalence", ctx))
        assert set(results) == {"equivalence.K", "equivalence.Hvec"}

    def test_tube_collapse_error_is_reported_as_null(self, torus_framed_coarse):
        fc = torus_framed_coarse
        u0 = float(fc.grid[300])
        grid = GridSpec(2, 8, (u0, u0 + 1e-3))
        k2, k3 = surface_jet(fc, RadiusFunction.constant(1.0), u0, 0.0).k[1:]
        m = max(k2 * math.cos(v) + k3 * math.sin(v) for v in grid.vs)
        # 常数半径 1/m 使 (u0, v*) 处 f = 0
        ctx = SuiteContext(fc, RadiusFunction.constant(1.0 / m), grid)
        results = checks(run_suite("equivalence", ctx))

        collapse = results["collapse.tube"].to_dict()
        assert collapse["max_residual"] is None
        assert collapse["pass"] is False
        assert collapse["params"]["error"].split(":")[0] in ("Irregular", "TubeSingular")
        assert results["equivalence.K"].params["skipped"] >= 1
        json.dumps([r.to_dict() for r in results.values()], allow_nan=False)

    def test_weingarten_on_straight_spine(self, straight_framed):
        ctx = SuiteContext(straight_framed, RadiusFunction.quadratic(1.0, 0.0, 1.0), GridSpec(20, 20, (0.0, 2.0)))
        results = checks(run_suite("weingarten", ctx))
        assert results["weingarten.jacobian"].passed is True
        assert results["weingarten.v_derivatives"].passed is True

    def test_weingarten_on_general_spine_is_informational(self, torus_framed_coarse):
        ctx = SuiteContext(torus_framed_coarse, RadiusFunction.sine(2.0, 0.3), GridSpec(6, 6, (0.5, 5.5)))
        results = run_suite("weingarten", ctx)
        assert [r.passed for r in results] == [None, None]

    @pytest.mark.parametrize(
        "rad, is_flat",
        [
            (RadiusFunction.linear(2.0, 6.0), True),
            (RadiusFunction.quadratic(0.0, 2.0, 6.0), True),
            (RadiusFunction.sampled([0.0, 0.5, 1.0, 1.5, 2.0], [6.0, 7.0, 8.0, 9.0, 10.0]), True),
            (RadiusFunction.quadratic(1.0, 0.0, 1.0), False),
        ],
    )
    def test_flat(self, straight_framed, rad, is_flat):
        (result,) = run_suite("flat", SuiteContext(straight_framed, rad, GRID))
        assert result.passed is True
        assert result.params["is_flat"] is is_flat
        assert result.params["expected_flat"] is is_flat

    def test_flat_needs_straight_spine(self, torus_framed_coarse):
        ctx = SuiteContext(torus_framed_coarse, RadiusFunction.linear(2.0, 6.0), GRID)
        with pytest.raises(WrongMode):
            run_suite("flat", ctx)

    def test_minimal(self, straight_framed):
        params = MinimalRadiusParams(1.0, math.log(2.0))
        rad = minimal_radius(params, (-1.0, 1.0), allow_branch_crossing=True)
        ctx = SuiteContext(straight_framed, rad, GridSpec(10, 10, (-1.0, 1.0)), minimal_params=params)
        results = checks(run_suite("minimal", ctx))
        assert set(results) == {"minimal.closed", "minimal.oracle", "minimal.relation"}
        assert all(r.passed for r in results.values())
        # u ≥ 0 的 5 个网格点在主分支上
        assert results["minimal.relation"].params["principal_points"] == 5

    def test_linear_weingarten(self, straight_framed):
        ctx = SuiteContext(straight_framed, RadiusFunction.constant(3.0), GRID, k=2.0)
        (result,) = run_suite("linear-weingarten", ctx)
        assert result.passed is True
        assert (result.params["a"], result.params["b"], result.params["c"]) == (0.0, 12.0, 2.0)
