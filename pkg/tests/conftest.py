"""Shared sampling helpers for the test suite."""

import numpy as np

import diamantine as dm


def random_spec(rng, d: int, min_rel_volume: float = 0.05) -> dm.FrameworkSpec:
    """Random non-degenerate framework with Gaussian edge vectors."""
    while True:
        vectors = rng.normal(size=(d + 1, d))
        spec = dm.make_from_vectors(vectors)
        scale = float(np.prod(np.sqrt(spec.squared_lengths)))
        if abs(dm.volume(spec)) > min_rel_volume * scale:
            return spec


def random_unit_planar(rng, min_abs_volume: float = 1e-2) -> dm.FrameworkSpec:
    """Random unit-length planar framework away from the degenerate locus."""
    while True:
        angles = rng.uniform(0.0, 2.0 * np.pi, size=3)
        spec = dm.make_from_vectors(
            np.column_stack([np.cos(angles), np.sin(angles)])
        )
        if abs(dm.volume(spec)) > min_abs_volume:
            return spec


def random_rotation(rng, d: int) -> np.ndarray:
    """Haar-ish random orthogonal matrix with determinant +1."""
    q, r = np.linalg.qr(rng.normal(size=(d, d)))
    q = q * np.sign(np.diagonal(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
