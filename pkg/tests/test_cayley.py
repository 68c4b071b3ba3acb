import numpy as np
import pytest

import diamantine as dm
from diamantine.auxetic import BOUNDARY, CAPABLE, INCAPABLE
from diamantine.cayley import NODES, POINTED, NOT_POINTED, torus_point, torus_volume_samples
from diamantine.errors import (
    ConeViolationError,
    InputError,
    OffHypersurfaceError,
    UnsupportedLengthsError,
)

from conftest import random_unit_planar


class TestCubic:
    def test_vanishes_at_nodes_exactly(self):
        for node in NODES:
            assert dm.f_cayley(node) == 0.0

    def test_vanishes_on_standard_image(self):
        assert dm.f_cayley((3.0, 1.5, 3.0)) == pytest.approx(0.0, abs=1e-12)

    def test_vanishes_on_random_unit_configurations(self):
        rng = np.random.default_rng(107)
        for _ in range(2000):
            spec = random_unit_planar(rng, min_abs_volume=0.0)
            w = dm.omega_of(spec)
            assert abs(dm.f_cayley((w[0, 0], w[0, 1], w[1, 1]))) < 1e-9


class TestGradient:
    def test_zero_at_nodes_exactly(self):
        for node in NODES:
            assert np.all(dm.grad_f(node) == 0.0)

    def test_nonzero_at_smooth_point(self):
        assert np.linalg.norm(dm.grad_f((3.0, 1.5, 3.0))) > 0.1

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(109)
        step = 1e-6
        for _ in range(1000):
            w = rng.uniform(-1.0, 5.0, size=3)
            grad = dm.grad_f(w)
            scale = max(1.0, float(np.max(np.abs(grad))))
            for k in range(3):
                plus, minus = w.copy(), w.copy()
                plus[k] += step
                minus[k] -= step
                fd = (dm.f_cayley(plus) - dm.f_cayley(minus)) / (2 * step)
                assert abs(grad[k] - fd) <= 1e-6 * scale

    def test_grid_search_finds_only_the_four_nodes(self):
        # every near-critical point of the cubic on a 200^3 grid over [-1,5]^3
        # sits next to a node; no fifth candidate appears
        axis = np.linspace(-1.0, 5.0, 200)
        nodes = np.array(NODES)
        hits = 0
        for w11 in axis:
            w12, w22 = np.meshgrid(axis, axis, indexing="ij")
            w = (np.full_like(w12, w11), w12, w22)
            f = dm.f_cayley(w)
            g1, g2, g3 = dm.grad_f(w)
            gnorm = np.sqrt(g1**2 + g2**2 + g3**2)
            candidates = (np.abs(f) < 0.05) & (gnorm < 0.05)
            if not candidates.any():
                continue
            pts = np.stack(np.broadcast_arrays(*w), axis=-1)[candidates]
            dists = np.min(np.linalg.norm(pts[:, None, :] - nodes[None, :, :], axis=-1), axis=1)
            assert np.max(dists) < 0.25
            hits += len(pts)
        assert hits > 0


class TestQuartic:
    def test_factorization_on_the_zero_plane(self):
        grid = np.linspace(-1.0, 5.0, 100)
        for a in grid:
            for b in grid:
                expected = a * b * (a + b - 4.0) * (a + b - 2.0) / 8.0
                assert dm.g_quartic((a, 0.0, b)) == pytest.approx(expected, abs=1e-9)

    def test_zero_along_the_first_factor(self):
        for t in np.linspace(-5, 5, 21):
            assert dm.g_quartic((0.0, 0.0, t)) == 0.0

    def test_positive_on_the_incapable_standard_image(self):
        # g is the determinant of the halved-gradient normal: positive means
        # definite normal, i.e. no auxetic capability
        assert dm.g_quartic((3.0, 1.5, 3.0)) == pytest.approx(1.6875, abs=1e-12)

    def test_sign_agrees_with_normal_determinant(self):
        rng = np.random.default_rng(113)
        for _ in range(200):
            w = rng.uniform(-1.0, 5.0, size=3)
            g = dm.grad_f(w)
            n = np.array([[g[0], g[1] / 2.0], [g[1] / 2.0, g[2]]])
            assert dm.g_quartic(w) == pytest.approx(np.linalg.det(n), rel=1e-9, abs=1e-9)


class TestHalfspace:
    def test_standard_image_incapable(self):
        assert dm.auxetic_halfspace_test((3.0, 1.5, 3.0)) == INCAPABLE

    def test_reentrant_image_capable(self):
        w = dm.omega_of(dm.make_reentrant())
        assert dm.auxetic_halfspace_test((w[0, 0], w[0, 1], w[1, 1])) == CAPABLE

    def test_exact_boundary_point(self):
        # (2, 0, 2) lies on the cubic, inside the cone, value exactly 4
        assert dm.auxetic_halfspace_test((2.0, 0.0, 2.0)) == BOUNDARY

    def test_off_cubic_rejected(self):
        with pytest.raises(OffHypersurfaceError):
            dm.auxetic_halfspace_test((1.0, 0.0, 1.0))

    def test_cone_violation_rejected(self):
        # (0,0,4) is on the cubic but on the cone boundary, not inside
        with pytest.raises(ConeViolationError):
            dm.auxetic_halfspace_test((0.0, 0.0, 4.0))


class TestPointedness:
    def test_standard_not_pointed(self):
        assert dm.pointedness_test(dm.make_standard(2)) == NOT_POINTED

    def test_opposite_pair_is_boundary(self):
        spec = dm.make_from_vectors([[0, 1], [1, 0], [-1, 0]])
        assert dm.pointedness_test(spec) == BOUNDARY

    def test_spread_of_120_degrees_is_pointed(self):
        angles = np.radians([0.0, 60.0, 120.0])
        spec = dm.make_from_vectors(np.column_stack([np.cos(angles), np.sin(angles)]))
        p = spec.edge_vectors
        assert p[0] @ p[1] + p[1] @ p[2] + p[2] @ p[0] == pytest.approx(0.5, abs=1e-12)
        assert dm.pointedness_test(spec) == POINTED

    def test_non_unit_lengths_unsupported(self):
        spec = dm.make_from_vectors([[2, 0], [0, 1], [-1, -1]])
        with pytest.raises(UnsupportedLengthsError):
            dm.pointedness_test(spec)

    def test_three_dimensional_unsupported(self):
        with pytest.raises(UnsupportedLengthsError):
            dm.pointedness_test(dm.make_standard(3))

    def test_equivalent_to_large_sector(self):
        rng = np.random.default_rng(127)
        checked = 0
        while checked < 200:
            angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=3))
            spec = dm.make_from_vectors(np.column_stack([np.cos(angles), np.sin(angles)]))
            total = sum(spec.edge_vectors[i] @ spec.edge_vectors[j] for i, j in ((0, 1), (1, 2), (2, 0)))
            if abs(total + 1.0) < 1e-6:
                continue
            gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * np.pi]]))
            has_wide_sector = np.max(gaps) > np.pi
            assert (dm.pointedness_test(spec) == POINTED) == has_wide_sector
            checked += 1


class TestTorusChart:
    def test_pins_third_vector_and_flags_degeneracy(self):
        spec, sample = torus_point((1.0, 2.0, 3.0), 0.3, 1.9)
        assert np.allclose(spec.edge_vectors[2], [np.sqrt(3.0), 0.0], atol=1e-15)
        assert not sample.degenerate
        _, collinear = torus_point((1.0, 1.0, 1.0), 0.0, 0.0)
        assert collinear.degenerate

    def test_vectorized_sampler_matches_pointwise(self):
        s = (1.0, 2.0, 3.0)
        grid = 16
        field = torus_volume_samples(s, grid)
        for i in range(grid):
            for j in range(grid):
                spec, _ = torus_point(s, 2 * np.pi * i / grid, 2 * np.pi * j / grid)
                assert field[i, j] == pytest.approx(dm.volume(spec), abs=1e-12)


class TestTopologyProbe:
    def test_generic_triple_gives_two_cylinders(self):
        report = dm.topology_probe((1.0, 2.0, 3.0), grid=256)
        assert report.component_count == 2
        assert report.euler_characteristics == (0, 0)
        assert report.saddle_present

    def test_unit_triple_gives_two_discs(self):
        report = dm.topology_probe((1.0, 1.0, 1.0), grid=256)
        assert report.component_count == 2
        assert report.euler_characteristics == (1, 1)
        assert not report.saddle_present

    def test_bottom_tie_gives_two_discs(self):
        report = dm.topology_probe((1.0, 1.0, 2.0), grid=256)
        assert report.component_count == 2
        assert report.euler_characteristics == (1, 1)
        assert not report.saddle_present

    def test_saddle_flag_tracks_strict_smallest_length(self):
        rng = np.random.default_rng(131)
        for _ in range(20):
            s = np.sort(rng.uniform(0.5, 3.0, size=3))
            if rng.random() < 0.5:
                s[1] = s[0]  # force the tie half the time
            report = dm.topology_probe(s, grid=64)
            assert report.saddle_present == (s[0] < s[1])

    def test_small_grid_rejected(self):
        with pytest.raises(InputError):
            dm.topology_probe((1.0, 2.0, 3.0), grid=32)

    def test_component_ordering_deterministic(self):
        a = dm.topology_probe((1.0, 2.0, 3.0), grid=128)
        b = dm.topology_probe((1.0, 2.0, 3.0), grid=128)
        assert a == b
