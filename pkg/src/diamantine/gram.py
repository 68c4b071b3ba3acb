"""Gram-matrix charts of the deformation space.

Two equivalent coordinate systems are used: the full (d+1)x(d+1) Gram matrix
G of the edge vectors, and the d x d Gram matrix omega of the lattice
generators v_i = p_i - p_0.  The two are related by an affine change of
coordinates, and the image of the deformation space in omega-coordinates is
the intersection of a degree-(d+1) hypersurface (a bordered determinant of
omega) with the positive definite cone.
"""

import numpy as np

from .errors import ConeViolationError, OffHypersurfaceError, ShapeError
from .framework import FrameworkSpec, _factor_psd_rank_d, _spec_from_array

RANK_RTOL = 1e-10

REGULAR_RANK_D = "regular-rank-d"
SINGULAR_BELOW_D = "singular-rank-below-d"


def gram_of(spec: FrameworkSpec) -> np.ndarray:
    """Full Gram matrix <p_i, p_j>, symmetric by construction."""
    p = spec.edge_vectors
    return p @ p.T


def omega_of(spec: FrameworkSpec) -> np.ndarray:
    """Gram matrix of the lattice generators; det(omega) = volume^2."""
    p = spec.edge_vectors
    v = p[1:] - p[0]
    return v @ v.T


def gram_from_omega(omega, squared_lengths) -> np.ndarray:
    """Recover the full Gram matrix from (omega, squared lengths).

    Uses <p_i, p_0> = (s_i + s_0 - omega_ii)/2 and
    <p_i, p_j> = omega_ij + (s_i + s_j - omega_ii - omega_jj)/2.
    """
    omega = np.asarray(omega, dtype=float)
    s = np.asarray(squared_lengths, dtype=float)
    d = _check_pair(omega, s)
    g = np.empty((d + 1, d + 1))
    g[0, 0] = s[0]
    diag = np.diagonal(omega)
    g[0, 1:] = g[1:, 0] = 0.5 * (s[1:] + s[0] - diag)
    g[1:, 1:] = omega + 0.5 * (
        s[1:, None] + s[None, 1:] - diag[:, None] - diag[None, :]
    )
    np.fill_diagonal(g[1:, 1:], s[1:])
    return g


def bordered_matrix(omega, squared_lengths) -> np.ndarray:
    """The bordered matrix whose determinant cuts out realizable (omega, s)."""
    omega = np.asarray(omega, dtype=float)
    s = np.asarray(squared_lengths, dtype=float)
    d = _check_pair(omega, s)
    m = np.empty((d + 1, d + 1))
    m[0, 0] = s[0]
    border = 0.5 * (s[1:] - s[0] - np.diagonal(omega))
    m[0, 1:] = m[1:, 0] = border
    m[1:, 1:] = omega
    return m


def bordered_residual(omega, squared_lengths) -> float:
    """Determinant of the bordered matrix; zero iff (omega, s) is realizable."""
    return float(np.linalg.det(bordered_matrix(omega, squared_lengths)))


def realize_from_omega(omega, squared_lengths, tol: float = 1e-6) -> FrameworkSpec:
    """Reconstruct an edge-vector configuration from lattice Gram data.

    Factors omega = B^T B for the generators, solves <p_0, v_i> =
    (s_i - s_0 - omega_ii)/2 for p_0, and verifies |p_0|^2 = s_0, which is
    exactly the condition that (omega, s) lies on the realizability
    hypersurface.  The output is gauge-fixed: v_1 along the first axis, v_2 in
    the first coordinate plane with positive second component, and so on,
    which also makes the cell volume positive.
    """
    omega = np.asarray(omega, dtype=float)
    s = np.asarray(squared_lengths, dtype=float)
    d = _check_pair(omega, s)

    vals, vecs = np.linalg.eigh(omega)
    if vals[0] <= RANK_RTOL * max(vals[-1], 0.0) or vals[-1] <= 0:
        raise ConeViolationError(
            f"omega is not positive definite (min eigenvalue {vals[0]:.3e})"
        )
    gens = (vecs * np.sqrt(vals)).T  # columns are v_1..v_d in some frame

    rhs = 0.5 * (s[1:] - s[0] - np.diagonal(omega))
    p0 = np.linalg.solve(gens.T, rhs)
    gap = abs(float(p0 @ p0) - s[0])
    if gap > tol * float(np.max(s)):
        raise OffHypersurfaceError(
            f"|p_0|^2 differs from s_0 by {gap:.3e}; input is not realizable"
        )
    vectors = np.vstack([p0, p0 + gens.T])
    return _spec_from_array(canonical_gauge(vectors))


def canonical_gauge(vectors: np.ndarray) -> np.ndarray:
    """Rotate/reflect a configuration into the deterministic lattice-aligned frame.

    After the transform the generator matrix [v_1 .. v_d] is upper triangular
    with positive diagonal, so serialization of congruent inputs is identical.
    """
    v = (vectors[1:] - vectors[0]).T
    q, r = np.linalg.qr(v)
    signs = np.sign(np.diagonal(r))
    signs[signs == 0] = 1.0
    return vectors @ (q * signs)


def rank_singularity_check(gram) -> str:
    """Classify a Gram matrix as regular (rank d) or singular (rank < d).

    Rank counts eigenvalues above 1e-10 times the largest one; d is inferred
    from the (d+1)x(d+1) input.
    """
    g = np.asarray(gram, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {g.shape}")
    d = g.shape[0] - 1
    vals = np.abs(np.linalg.eigvalsh(g))
    rank = int(np.count_nonzero(vals > RANK_RTOL * vals[-1])) if vals[-1] > 0 else 0
    return REGULAR_RANK_D if rank >= d else SINGULAR_BELOW_D


def factor_gram(gram: np.ndarray, d: int) -> FrameworkSpec:
    """Realize a PSD rank-d Gram matrix as an edge-vector configuration."""
    vectors = _factor_psd_rank_d(np.asarray(gram, dtype=float), d)
    return _spec_from_array(canonical_gauge(vectors))


def _check_pair(omega: np.ndarray, s: np.ndarray) -> int:
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
        raise ShapeError(f"omega must be a square matrix, got shape {omega.shape}")
    d = omega.shape[0]
    if s.shape != (d + 1,):
        raise ShapeError(
            f"need {d + 1} squared lengths for a {d}x{d} omega, got {s.shape}"
        )
    if np.any(s <= 0):
        raise ShapeError("squared lengths must be positive")
    return d
