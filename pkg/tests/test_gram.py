import numpy as np
import pytest

import diamantine as dm
from diamantine.errors import ConeViolationError, OffHypersurfaceError, ShapeError
from diamantine.gram import REGULAR_RANK_D, SINGULAR_BELOW_D, bordered_matrix, factor_gram

from conftest import random_rotation, random_spec


class TestGramOf:
    def test_standard_planar(self):
        g = dm.gram_of(dm.make_standard(2))
        expected = np.array([[1, -0.5, -0.5], [-0.5, 1, -0.5], [-0.5, -0.5, 1]])
        assert np.allclose(g, expected, atol=1e-12)

    def test_duplicated_vector_gives_duplicated_row(self):
        spec = dm.make_from_vectors([[1, 0], [0, 1], [1, 0]])
        g = dm.gram_of(spec)
        assert np.array_equal(g[0], g[2])
        assert np.linalg.matrix_rank(g) == 2

    def test_spectrum_d_positive_one_zero(self):
        rng = np.random.default_rng(5)
        for d in (2, 3, 4):
            spec = random_spec(rng, d)
            vals = np.linalg.eigvalsh(dm.gram_of(spec))
            assert np.sum(vals > 1e-10 * vals[-1]) == d
            assert abs(vals[0]) <= 1e-10 * vals[-1]


class TestOmegaOf:
    def test_standard_planar_value(self):
        omega = dm.omega_of(dm.make_standard(2))
        assert np.allclose(omega, [[3, 1.5], [1.5, 3]], atol=1e-12)
        assert np.linalg.det(omega) == pytest.approx(6.75, abs=1e-9)

    def test_determinant_is_squared_volume(self):
        rng = np.random.default_rng(9)
        for d in (2, 3, 4):
            for _ in range(30):
                spec = random_spec(rng, d)
                assert np.linalg.det(dm.omega_of(spec)) == pytest.approx(
                    dm.volume(spec) ** 2, rel=1e-9
                )

    def test_degenerate_spec_gives_singular_omega(self):
        spec = dm.make_from_vectors([[1, 0], [2, 0], [3, 0]])
        assert np.linalg.det(dm.omega_of(spec)) == pytest.approx(0.0, abs=1e-12)

    def test_rotation_invariance(self):
        rng = np.random.default_rng(13)
        spec = random_spec(rng, 3)
        q = random_rotation(rng, 3)
        rotated = dm.make_from_vectors(spec.edge_vectors @ q.T)
        assert np.allclose(dm.omega_of(rotated), dm.omega_of(spec), atol=1e-12)


class TestGramFromOmega:
    def test_standard_values(self):
        g = dm.gram_from_omega([[3, 1.5], [1.5, 3]], (1, 1, 1))
        assert np.allclose(g, [[1, -0.5, -0.5], [-0.5, 1, -0.5], [-0.5, -0.5, 1]], atol=1e-12)

    def test_affine_map_round_trip_is_identity(self):
        rng = np.random.default_rng(17)
        for d in (2, 3, 4):
            for _ in range(30):
                spec = random_spec(rng, d)
                g = dm.gram_from_omega(dm.omega_of(spec), spec.squared_lengths)
                assert np.allclose(g, dm.gram_of(spec), atol=1e-12)

    def test_zero_omega_collapses_to_rank_one(self):
        g = dm.gram_from_omega(np.zeros((2, 2)), (1, 1, 1))
        assert np.allclose(g, 1.0, atol=1e-15)
        assert np.linalg.matrix_rank(g) == 1

    def test_shape_mismatch_raises(self):
        with pytest.raises(ShapeError):
            dm.gram_from_omega(np.eye(2), (1, 1, 1, 1))
        with pytest.raises(ShapeError):
            dm.gram_from_omega(np.ones((2, 3)), (1, 1, 1))


class TestBorderedResidual:
    def test_vanishes_on_realized_configurations(self):
        rng = np.random.default_rng(23)
        for d in (2, 3, 4):
            for _ in range(30):
                spec = random_spec(rng, d)
                res = dm.bordered_residual(dm.omega_of(spec), spec.squared_lengths)
                scale = float(np.prod(spec.squared_lengths))
                assert abs(res) <= 1e-9 * scale

    def test_perturbation_moves_off_surface(self):
        spec = dm.make_standard(2)
        omega = dm.omega_of(spec).copy()
        omega[0, 0] += 0.1
        assert abs(dm.bordered_residual(omega, spec.squared_lengths)) > 1e-3

    def test_matches_planar_cubic_identically(self):
        # for unit lengths in the plane the bordered determinant IS the
        # nodal cubic, constant factor one
        rng = np.random.default_rng(29)
        for _ in range(200):
            w11, w12, w22 = rng.uniform(-3, 6, size=3)
            omega = np.array([[w11, w12], [w12, w22]])
            res = dm.bordered_residual(omega, (1.0, 1.0, 1.0))
            assert res == pytest.approx(dm.f_cayley((w11, w12, w22)), rel=1e-12, abs=1e-12)

    def test_bordered_matrix_layout(self):
        m = bordered_matrix([[3, 1.5], [1.5, 3]], (1, 1, 1))
        assert m[0, 0] == 1.0
        assert m[0, 1] == m[1, 0] == 0.5 * (1 - 1 - 3)
        assert np.array_equal(m[1:, 1:], [[3, 1.5], [1.5, 3]])


class TestRealizeFromOmega:
    def test_standard_reconstruction(self):
        rebuilt = dm.realize_from_omega([[3.0, 1.5], [1.5, 3.0]], (1.0, 1.0, 1.0))
        assert np.allclose(dm.gram_of(rebuilt), dm.gram_of(dm.make_standard(2)), atol=1e-9)

    def test_round_trip_over_random_specs(self):
        rng = np.random.default_rng(31)
        for d in (2, 3):
            for _ in range(50):
                spec = random_spec(rng, d)
                omega = dm.omega_of(spec)
                rebuilt = dm.realize_from_omega(omega, spec.squared_lengths)
                assert np.allclose(dm.omega_of(rebuilt), omega, atol=1e-9)
                assert np.allclose(dm.gram_of(rebuilt), dm.gram_of(spec), atol=1e-9)

    def test_identity_omega_is_off_surface(self):
        with pytest.raises(OffHypersurfaceError):
            dm.realize_from_omega(np.eye(2), (1.0, 1.0, 1.0))

    def test_indefinite_omega_violates_cone(self):
        with pytest.raises(ConeViolationError):
            dm.realize_from_omega([[1.0, 2.0], [2.0, 1.0]], (1.0, 1.0, 1.0))

    def test_gauge_is_deterministic_and_aligned(self):
        spec = dm.realize_from_omega([[3.0, 1.5], [1.5, 3.0]], (1.0, 1.0, 1.0))
        again = dm.realize_from_omega([[3.0, 1.5], [1.5, 3.0]], (1.0, 1.0, 1.0))
        assert np.array_equal(spec.edge_vectors, again.edge_vectors)
        gens = (spec.edge_vectors[1:] - spec.edge_vectors[0]).T
        assert abs(gens[1, 0]) < 1e-12  # v_1 along the first axis
        assert gens[0, 0] > 0 and gens[1, 1] > 0
        assert dm.volume(spec) > 0


class TestRankSingularityCheck:
    def test_standard_is_regular(self):
        assert dm.rank_singularity_check(dm.gram_of(dm.make_standard(2))) == REGULAR_RANK_D

    def test_repeated_vector_rank_one(self):
        spec = dm.make_from_vectors([[1, 0], [1, 0], [1, 0]])
        assert dm.rank_singularity_check(dm.gram_of(spec)) == SINGULAR_BELOW_D

    def test_vectors_on_a_line_through_origin(self):
        spec = dm.make_from_vectors([[1, 0], [2, 0], [-1, 0]])
        assert dm.rank_singularity_check(dm.gram_of(spec)) == SINGULAR_BELOW_D

    def test_collinear_points_off_origin_still_regular(self):
        # endpoints collinear (degenerate cell) but the vectors span the plane
        spec = dm.make_from_vectors([[0, 1], [1, 1], [2, 1]])
        assert spec.is_degenerate
        assert dm.rank_singularity_check(dm.gram_of(spec)) == REGULAR_RANK_D


class TestFactorGram:
    def test_round_trip(self):
        rng = np.random.default_rng(37)
        spec = random_spec(rng, 3)
        g = dm.gram_of(spec)
        rebuilt = factor_gram(g, 3)
        assert np.allclose(dm.gram_of(rebuilt), g, atol=1e-9)
