"""有限差分 oracle 的测试"""

import math

import numpy as np
import pytest

from canal4d.analysis.oracle import OracleConfig, oracle_convergence_ratio, oracle_curvature
from canal4d.exceptions import InvalidParameter, Irregular, NonOrthogonalPatch, OutOfDomain
from canal4d.geometry.canal import gauss_K, mean_vector, surface_jet, surface_point
from canal4d.geometry.radius import RadiusFunction


def unit_sphere(u, v):
    return np.array([math.cos(u) * math.cos(v), math.cos(u) * math.sin(v), math.sin(u), 0.0])


class TestOracleConfig:
    def test_defaults(self):
        cfg = OracleConfig()
        assert (cfg.h_u, cfg.h_v, cfg.order) == (1e-4, 1e-4, 2)
        assert cfg.reach == 1

    def test_uniform(self):
        cfg = OracleConfig.uniform(1e-3, order=4)
        assert cfg.h_u == cfg.h_v == 1e-3
        assert cfg.reach == 2

    @pytest.mark.parametrize("kwargs", [{"h_u": 0.0}, {"h_v": 0.02}, {"order": 3}])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParameter):
            OracleConfig(**kwargs)


class TestKnownSurfaces:
    def test_plane(self):
        res = oracle_curvature(lambda u, v: np.array([u, v, 0.0, 0.0]), 0.2, 0.7)
        assert res.K == pytest.approx(0.0, abs=1e-12)
        assert res.H == pytest.approx(0.0, abs=1e-7)

    @pytest.mark.parametrize("order", [2, 4])
    def test_unit_sphere(self, order):
        res = oracle_curvature(unit_sphere, 0.3, 1.0, OracleConfig.uniform(1e-3, order))
        assert res.K == pytest.approx(1.0, abs=1e-5)
        assert res.H == pytest.approx(1.0, abs=1e-5)
        # 平均曲率向量指向球心
        np.testing.assert_allclose(res.Hvec, -unit_sphere(0.3, 1.0), atol=1e-5)

    def test_straight_tube(self, straight_framed):
        rad = RadiusFunction.constant(1.0)
        cfg = OracleConfig(h_u=1e-3, h_v=1e-3, order=4)
        for u, v in [(0.0, 0.0), (0.7, 2.0), (1.9, 5.0)]:
            res = oracle_curvature(lambda a, b: surface_point(straight_framed, rad, a, b), u, v, cfg)
            assert abs(res.K) <= 1e-8
            assert abs(res.H - 0.5) <= 1e-8


class TestAgainstClosedForm:
    @pytest.mark.parametrize("u, v", [(1.0, 0.5), (3.3, 2.0), (5.5, 4.1)])
    def test_example_canal(self, torus_framed, u, v):
        rad = RadiusFunction.sine(2.0, 0.3)
        res = oracle_curvature(
            lambda a, b: surface_point(torus_framed, rad, a, b), u, v, u_range=torus_framed.u_range
        )
        jet = surface_jet(torus_framed, rad, u, v)
        scale = max(1.0, abs(res.K))
        assert abs(gauss_K(jet) - res.K) / scale <= 1e-5
        assert np.max(np.abs(mean_vector(jet) - res.Hvec)) / max(1.0, res.H) <= 1e-5

    def test_second_order_convergence(self, straight_framed):
        rad = RadiusFunction.cosh_scaled(1.0, 0.0)
        u, v = 0.3, 2.0
        reference = gauss_K(surface_jet(straight_framed, rad, u, v), "straight")
        ratio = oracle_convergence_ratio(
            lambda a, b: surface_point(straight_framed, rad, a, b), u, v, reference, 8e-3
        )
        assert 3.5 <= ratio <= 4.5


class TestErrors:
    def test_near_range_end(self, torus_framed):
        rad = RadiusFunction.sine(2.0, 0.3)
        with pytest.raises(OutOfDomain):
            oracle_curvature(
                lambda a, b: surface_point(torus_framed, rad, a, b),
                1e-4,
                0.0,
                u_range=torus_framed.u_range,
            )

    def test_skewed_parametrization(self):
        with pytest.raises(NonOrthogonalPatch):
            oracle_curvature(lambda u, v: np.array([u, u + v, 0.0, 0.0]), 0.0, 0.0)

    def test_degenerate_patch(self):
        with pytest.raises(Irregular):
            oracle_curvature(lambda u, v: np.array([u, 0.0, 0.0, 0.0]), 0.0, 0.0)
