"""四维向量与标架的单元测试"""

import numpy as np
import pytest

from canal4d.exceptions import InvalidParameter, NotOrthonormal, RankDeficient
from canal4d.geometry.vectors import (
    Frame4,
    as_vec4,
    complete_frame,
    dot,
    gram_schmidt,
    norm,
    vec4,
)

E = np.eye(4)


class TestVec4:
    def test_as_vec4_is_read_only(self):
        v = as_vec4([1, 2, 3, 4])
        assert v.dtype == np.float64
        with pytest.raises(ValueError):
            v[0] = 5.0

    def test_rejects_wrong_shape(self):
        with pytest.raises(InvalidParameter):
            as_vec4([1, 2, 3])

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidParameter):
            vec4(1.0, float("nan"), 0.0, 0.0)
        with pytest.raises(InvalidParameter):
            vec4(float("inf"), 0.0, 0.0, 0.0)

    @pytest.mark.parametrize(
        "u, v, expected",
        [
            ((1, 0, 0, 0), (1, 0, 0, 0), 1.0),
            ((1, 0, 0, 0), (0, 1, 0, 0), 0.0),
            ((1, 2, 3, 4), (4, 3, 2, 1), 20.0),
        ],
    )
    def test_dot(self, u, v, expected):
        assert dot(u, v) == expected

    def test_norm(self):
        assert norm((3, 4, 0, 0)) == 5.0


class TestGramSchmidt:
    def test_scaling(self):
        (q,) = gram_schmidt([(2, 0, 0, 0)])
        np.testing.assert_array_equal(q, E[0])

    def test_one_projection_step(self):
        q1, q2 = gram_schmidt([(1, 0, 0, 0), (1, 1, 0, 0)])
        np.testing.assert_allclose(q1, E[0])
        np.testing.assert_allclose(q2, E[1], atol=1e-15)

    def test_dependent_input_reports_step(self):
        with pytest.raises(RankDeficient) as exc:
            gram_schmidt([(1, 0, 0, 0), (2, 0, 0, 0)])
        assert exc.value.step == 2

    def test_zero_vector_is_rank_deficient_at_step_one(self):
        with pytest.raises(RankDeficient) as exc:
            gram_schmidt([(0, 0, 0, 0)])
        assert exc.value.step == 1

    @pytest.mark.parametrize("scale", [1.03e-192, 1e-300, 1e200])
    def test_extreme_magnitudes(self, scale):
        (q,) = gram_schmidt([(0, 0, 0, scale)])
        np.testing.assert_array_equal(q, E[3])
        q1, q2 = gram_schmidt([(scale, 0, 0, 0), (scale, scale, 0, 0)])
        np.testing.assert_allclose(q1, E[0])
        np.testing.assert_allclose(q2, E[1], atol=1e-15)

    def test_tiny_dependent_input_is_still_rank_deficient(self):
        with pytest.raises(RankDeficient) as exc:
            gram_schmidt([(1e-200, 0, 0, 0), (3e-200, 0, 0, 0)])
        assert exc.value.step == 2

    def test_positive_orientation_against_input(self):
        vs = [(1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1), (1, 0, 0, 1.5)]
        qs = gram_schmidt(vs)
        gram = np.array(qs) @ np.array(qs).T
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-12)
        for k, (v, q) in enumerate(zip(vs, qs)):
            residual = np.array(v, dtype=float)
            for prev in qs[:k]:
                residual -= np.dot(prev, residual) * prev
            assert np.dot(residual, q) > 0

    def test_invalid_arguments(self):
        with pytest.raises(InvalidParameter):
            gram_schmidt([(1, 0, 0, 0)], tol=0.0)
        with pytest.raises(InvalidParameter):
            gram_schmidt([])


class TestCompleteFrame:
    def test_canonical_completion(self):
        frame = complete_frame([(1, 0, 0, 0)])
        np.testing.assert_allclose(frame.matrix, E, atol=1e-15)

    def test_completion_is_orientation_corrected(self):
        frame = complete_frame([(0, 1, 0, 0)])
        expected = np.array(
            [
                [0, 1, 0, 0],
                [1, 0, 0, 0],
                [0, 0, 1, 0],
                [0, 0, 0, -1],
            ],
            dtype=float,
        )
        np.testing.assert_allclose(frame.matrix, expected, atol=1e-15)
        assert frame.determinant() == pytest.approx(1.0)

    def test_three_vectors_fix_last_by_orientation(self):
        frame = complete_frame([E[0], E[1], E[2]])
        np.testing.assert_allclose(frame.matrix, E, atol=1e-15)

    def test_leading_vectors_are_kept(self):
        t = np.array([0.0, 0.6, 0.0, 0.8])
        n = np.array([-0.6, 0.0, -1.6, 0.0]) / np.sqrt(2.92)
        frame = complete_frame([t, n])
        np.testing.assert_array_equal(frame.T, t)
        np.testing.assert_array_equal(frame.M1, n)
        assert frame.is_valid()

    def test_not_orthonormal(self):
        with pytest.raises(NotOrthonormal):
            complete_frame([(1, 0, 0, 0), (1, 1, 0, 0)])
        with pytest.raises(NotOrthonormal):
            complete_frame([(2, 0, 0, 0)])


class TestFrame4:
    def test_components_round_trip(self):
        frame = complete_frame([(0, 0.6, 0, 0.8)])
        x = np.array([1.0, -2.0, 0.5, 3.0])
        np.testing.assert_allclose(frame.to_ambient(frame.components(x)), x, atol=1e-14)

    def test_invalid_shape(self):
        with pytest.raises(InvalidParameter):
            Frame4(np.eye(3))

    def test_defect_and_determinant(self):
        frame = Frame4.from_vectors(E[0], E[1], E[2], -E[3])
        assert frame.orthonormality_defect() == 0.0
        assert frame.determinant() == pytest.approx(-1.0)
        assert not frame.is_valid()
