"""平行传输标架、Frenet 标架与欧拉角的测试"""

import math

import numpy as np
import pytest

from canal4d.exceptions import (
    FrenetUndefined,
    GimbalLock,
    InvalidParameter,
    MismatchedTangent,
    NotUnitSpeed,
    OutOfDomain,
    StepTooLarge,
)
from canal4d.geometry.curves import CurveSpec, make_curve
from canal4d.geometry.frames import (
    EulerAngles,
    euler_angles_at,
    frame_convergence_ratio,
    frame_curve,
    frenet_at,
    frenet_from_angles,
    propagate,
    rotate_normal,
    rotation_in_plane,
    seed_frame,
    theorem1_residuals,
)
from canal4d.geometry.vectors import Frame4

from conftest import KAPPA_EXAMPLE, straight_spine


def planar_torus():
    s = 1.0 / math.sqrt(2.0)
    return make_curve(CurveSpec.torus_curve(s, s, 1.0, 1.0))


class TestSeedFrame:
    def test_line_gives_canonical_frame(self):
        curve = make_curve(CurveSpec.line((0, 0, 0, 0), (1, 0, 0, 0)))
        frame = seed_frame(curve, 0.0)
        np.testing.assert_allclose(frame.matrix, np.eye(4), atol=1e-15)

    def test_torus_principal_normal(self, torus_curve):
        frame = seed_frame(torus_curve, 0.0)
        np.testing.assert_allclose(frame.T, [0, 0.6, 0, 0.8], atol=1e-15)
        np.testing.assert_allclose(frame.M1, np.array([-0.6, 0, -1.6, 0]) / KAPPA_EXAMPLE, atol=1e-15)
        assert frame.is_valid()

    def test_deterministic(self, torus_curve):
        a = seed_frame(torus_curve, 1.0)
        b = seed_frame(torus_curve, 1.0)
        np.testing.assert_array_equal(a.matrix, b.matrix)

    def test_not_unit_speed(self):
        curve = make_curve(CurveSpec.line((0, 0, 0, 0), (2, 0, 0, 0)), strict=False)
        with pytest.raises(NotUnitSpeed):
            seed_frame(curve, 0.0)


class TestPropagate:
    def test_example_spine_frame_integrity(self, torus_framed):
        defect = max(torus_framed.frame(i).orthonormality_defect() for i in range(len(torus_framed)))
        assert defect <= 1e-8
        kappa = np.sqrt(np.sum(torus_framed.k**2, axis=1))
        assert np.max(np.abs(kappa - KAPPA_EXAMPLE)) <= 1e-6

    def test_grid_spacing(self, torus_framed):
        assert torus_framed.grid[0] == 0.0
        assert torus_framed.grid[-1] == 2.0 * math.pi
        assert np.all(np.diff(torus_framed.grid) > 0)
        assert np.max(np.diff(torus_framed.grid)) <= 1e-3 + 1e-12

    def test_first_tangent_matches_curve(self, torus_curve, torus_framed):
        np.testing.assert_allclose(torus_framed.frame(0).T, torus_curve.tangent(0.0), atol=1e-10)

    def test_normals_stay_normal(self, torus_framed):
        for m in torus_framed.matrices[::50]:
            assert np.max(np.abs(m[1:] @ m[0])) <= 1e-8
        assert torus_framed.max_drift <= 1e-8

    def test_line_frame_is_constant(self):
        curve = make_curve(CurveSpec.line((0, 0, 0, 0), (1, 0, 0, 0), (0.0, 5.0)))
        rot = rotation_in_plane(0.3, 1, 2)
        fc = frame_curve(curve, 0.0, 5.0, 0.01, seed_rotation=rot)
        for m in fc.matrices:
            np.testing.assert_allclose(m, fc.matrices[0], atol=1e-13)
        np.testing.assert_array_equal(fc.k, np.zeros_like(fc.k))

    def test_step_too_large(self, torus_curve):
        with pytest.raises(StepTooLarge):
            frame_curve(torus_curve, 0.0, 1.0, 0.2)

    def test_nonpositive_step(self, torus_curve):
        with pytest.raises(InvalidParameter):
            frame_curve(torus_curve, 0.0, 1.0, 0.0)

    def test_seed_must_match_tangent(self, torus_curve):
        with pytest.raises(MismatchedTangent):
            propagate(torus_curve, 0.0, 1.0, 0.01, Frame4(np.eye(4)))

    def test_outside_domain(self, torus_curve):
        with pytest.raises(OutOfDomain):
            frame_curve(torus_curve, 0.0, 7.0, 0.01)

    def test_reversal_returns_seed(self, torus_curve):
        forward = frame_curve(torus_curve, 0.0, 2.0, 1e-3)
        back = propagate(torus_curve, 2.0, 0.0, 1e-3, forward.frame(len(forward) - 1))
        assert back.seed_index == len(back) - 1
        np.testing.assert_allclose(back.matrices[0], forward.matrices[0], atol=1e-7)

    def test_rotation_covariance(self, torus_curve):
        rot = rotation_in_plane(0.7, 0, 2) @ rotation_in_plane(-0.4, 1, 2)
        plain = frame_curve(torus_curve, 0.0, 3.0, 1e-2)
        rotated = frame_curve(torus_curve, 0.0, 3.0, 1e-2, seed_rotation=rot)
        for a, b in zip(plain.matrices, rotated.matrices):
            np.testing.assert_allclose(b[1:], rot @ a[1:], atol=1e-7)

    def test_framed_curve_is_read_only(self, torus_framed):
        with pytest.raises(ValueError):
            torus_framed.matrices[0, 0, 0] = 1.0

    def test_fourth_order_convergence(self, torus_curve):
        assert 12.0 <= frame_convergence_ratio(torus_curve, 0.0, 2.0, 0.05) <= 20.0


class TestFrameAt:
    def test_node_is_exact(self, torus_framed):
        u = float(torus_framed.grid[123])
        np.testing.assert_array_equal(torus_framed.frame_matrix_at(u), torus_framed.matrices[123])

    @pytest.mark.parametrize("method", ["rk4", "linear"])
    def test_between_nodes(self, torus_curve, torus_framed, method):
        u = 1.23456
        frame = torus_framed.frame_at(u, method)
        assert frame.orthonormality_defect() <= 1e-12
        np.testing.assert_allclose(frame.T, torus_curve.tangent(u), atol=1e-12)

    def test_methods_agree(self, torus_framed):
        u = 2.0005
        a = torus_framed.frame_matrix_at(u, "rk4")
        b = torus_framed.frame_matrix_at(u, "linear")
        np.testing.assert_allclose(a, b, atol=5e-6)

    def test_unknown_method(self, torus_framed):
        with pytest.raises(InvalidParameter):
            torus_framed.frame_matrix_at(0.5005, "cubic")

    def test_outside_grid(self, torus_framed):
        with pytest.raises(OutOfDomain):
            torus_framed.frame_at(-0.1)

    def test_curvatures_at(self, torus_framed):
        u = 0.7775
        k, dk = torus_framed.curvatures_at(torus_framed.frame_matrix_at(u), u)
        assert np.linalg.norm(k) == pytest.approx(KAPPA_EXAMPLE, abs=1e-9)
        assert dk.shape == (3,)


class TestRotations:
    def test_rotation_in_plane(self):
        rot = rotation_in_plane(math.pi / 2, 0, 1)
        np.testing.assert_allclose(rot @ [1, 0, 0], [0, 1, 0], atol=1e-15)

    def test_same_indices(self):
        with pytest.raises(InvalidParameter):
            rotation_in_plane(0.1, 1, 1)

    def test_rotate_normal_rejects_reflection(self):
        with pytest.raises(InvalidParameter):
            rotate_normal(Frame4(np.eye(4)), np.diag([1.0, 1.0, -1.0]))


class TestFrenet:
    def test_line(self):
        curve = make_curve(CurveSpec.line((0, 0, 0, 0), (1, 0, 0, 0), (0.0, 5.0)))
        with pytest.raises(FrenetUndefined) as exc:
            frenet_at(curve, 1.0)
        assert exc.value.step == 2

    def test_planar_circle(self):
        with pytest.raises(FrenetUndefined) as exc:
            frenet_at(planar_torus(), 1.0)
        assert exc.value.step == 3

    def test_example_spine(self, torus_curve):
        fr = frenet_at(torus_curve, 1.0)
        assert fr.kappa == pytest.approx(KAPPA_EXAMPLE, abs=1e-9)
        assert np.max(np.abs(fr.matrix @ fr.matrix.T - np.eye(4))) <= 1e-8
        assert np.linalg.det(fr.matrix) > 0

    def test_needs_interior_parameter(self, torus_curve):
        with pytest.raises(OutOfDomain):
            frenet_at(torus_curve, 1e-5)


class TestEulerAngles:
    def test_coinciding_frames(self, torus_curve):
        fr = frenet_at(torus_curve, 1.0)
        angles = euler_angles_at(fr, Frame4(fr.matrix))
        assert angles.theta == pytest.approx(0.0, abs=1e-12)
        assert angles.psi == pytest.approx(0.0, abs=1e-12)
        assert angles.phi == pytest.approx(0.0, abs=1e-12)

    def test_rotation_in_binormal_plane(self, torus_curve):
        fr = frenet_at(torus_curve, 1.0)
        alpha = 0.4
        ca, sa = math.cos(alpha), math.sin(alpha)
        pt = Frame4.from_vectors(fr.T, fr.N, ca * fr.B1 - sa * fr.B2, sa * fr.B1 + ca * fr.B2)
        angles = euler_angles_at(fr, pt)
        assert angles.theta == pytest.approx(0.0, abs=1e-12)
        assert angles.psi == pytest.approx(0.0, abs=1e-12)
        assert angles.phi == pytest.approx(-alpha, abs=1e-12)
        np.testing.assert_allclose(
            frenet_from_angles(pt, angles), fr.matrix[1:], atol=1e-12
        )

    def test_reconstruction_on_general_rotation(self, torus_curve):
        fr = frenet_at(torus_curve, 2.5)
        angles = EulerAngles(theta=0.3, psi=-1.1, phi=2.0)
        rot = angles.normal_rotation()
        # (N, B1, B2) = R·(M1, M2, M3)  ⇒  (M1, M2, M3) = Rᵀ·(N, B1, B2)
        normal = rot.T @ fr.matrix[1:]
        pt = Frame4(np.vstack([fr.T, normal]))
        got = euler_angles_at(fr, pt)
        assert got.theta == pytest.approx(0.3, abs=1e-12)
        assert got.psi == pytest.approx(-1.1, abs=1e-12)
        assert got.phi == pytest.approx(2.0, abs=1e-12)

    def test_gimbal_lock(self, torus_curve):
        fr = frenet_at(torus_curve, 1.0)
        pt = Frame4.from_vectors(fr.T, fr.B2, fr.N, fr.B1)
        with pytest.raises(GimbalLock):
            euler_angles_at(fr, pt)

    def test_mismatched_tangent(self, torus_curve):
        fr = frenet_at(torus_curve, 1.0)
        pt = Frame4.from_vectors(-fr.T, -fr.N, fr.B1, fr.B2)
        with pytest.raises(MismatchedTangent):
            euler_angles_at(fr, pt)

    def test_predicted_k_matches_frame(self, torus_curve, torus_framed):
        i = 2000
        u = float(torus_framed.grid[i])
        fr = frenet_at(torus_curve, u)
        angles = euler_angles_at(fr, torus_framed.frame(i))
        np.testing.assert_allclose(angles.predicted_k(fr.kappa), torus_framed.k[i], atol=1e-6)


class TestTheorem1Residuals:
    def test_example_spine(self, torus_framed):
        report = theorem1_residuals(torus_framed)
        assert report.max_residual <= 1e-5
        assert report.evaluated > 0.99 * len(torus_framed)
        assert report.evaluated + report.skipped == len(torus_framed)

    def test_line_skips_everything(self):
        fc = straight_spine(0.0, 5.0, 0.05)
        report = theorem1_residuals(fc)
        assert report.skipped == len(fc)
        assert report.evaluated == 0
        assert report.max_residual == 0.0

    def test_planar_circle_skips_everything(self):
        fc = frame_curve(planar_torus(), 0.0, 2.0 * math.pi, 0.05)
        report = theorem1_residuals(fc)
        assert report.skipped == len(fc)
