"""Diamond-type periodic frameworks: edge-vector configurations, volume, patches.

A diamantine framework in dimension d is encoded by the d+1 edge vectors
p_0..p_d emanating from the joint at the origin.  The periodicity lattice is
generated by v_i = p_i - p_0, and the quotient graph has two vertex orbits
(origin and p_0) joined by d+1 edge orbits.  All functions here are pure;
arrays stored on the returned objects are read-only.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateCellError,
    InputError,
    RealizationError,
    ShapeError,
    ZeroLengthBarError,
)

# A cell counts as degenerate when |V| <= DEGENERACY_RTOL * prod(sqrt(s_i)),
# which makes the cutoff invariant under rescaling of the whole framework.
DEGENERACY_RTOL = 1e-10


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class FrameworkSpec:
    """Edge-vector configuration p_0..p_d of a d-dimensional diamantine framework."""

    dimension: int
    edge_vectors: np.ndarray      # shape (d+1, d), read-only
    squared_lengths: np.ndarray   # shape (d+1,), <p_i, p_i>

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrameworkSpec):
            return NotImplemented
        return self.dimension == other.dimension and np.array_equal(
            self.edge_vectors, other.edge_vectors
        )

    @property
    def is_degenerate(self) -> bool:
        scale = float(np.prod(np.sqrt(self.squared_lengths)))
        return abs(volume(self)) <= DEGENERACY_RTOL * scale


@dataclass(frozen=True)
class PeriodicityLattice:
    """Lattice generators v_i = p_i - p_0; linearly independent iff V != 0."""

    generators: np.ndarray  # shape (d, d), row i is v_{i+1}


@dataclass(frozen=True)
class Patch:
    """Finite fragment of the periodic framework, for export and plotting."""

    vertices: np.ndarray       # (n, d) positions
    edges: np.ndarray          # (m, 2) index pairs into vertices
    multi_indices: np.ndarray  # (n, d) integer lattice translate of each vertex
    orbits: np.ndarray         # (n,) 0 for origin orbit, 1 for p_0 orbit


def _spec_from_array(vectors: np.ndarray) -> FrameworkSpec:
    s = np.einsum("ij,ij->i", vectors, vectors)
    return FrameworkSpec(
        dimension=vectors.shape[1],
        edge_vectors=_readonly(vectors),
        squared_lengths=_readonly(s),
    )


def make_standard(d: int) -> FrameworkSpec:
    """Unit-edge framework whose edge vectors point to the vertices of a regular simplex.

    All inner products <p_i, p_j> equal -1/d for i != j.  The configuration is
    obtained by factoring the corresponding rank-d Gram matrix; the result is
    oriented so that the cell volume is positive.
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InputError(f"dimension must be an integer >= 2, got {d!r}")
    gram = np.full((d + 1, d + 1), -1.0 / d)
    np.fill_diagonal(gram, 1.0)
    vectors = _factor_psd_rank_d(gram, d)
    spec = _spec_from_array(vectors)
    if volume(spec) < 0:
        vectors = vectors[[0, 2, 1] + list(range(3, d + 1))]
        spec = _spec_from_array(vectors)
    return spec


def make_from_vectors(vectors) -> FrameworkSpec:
    """Build a framework from explicit edge vectors (d+1 vectors of dimension d).

    Degenerate (V = 0) inputs are accepted and flagged via ``is_degenerate``;
    zero vectors are rejected because they correspond to zero-length bars.
    """
    arr = np.atleast_2d(np.asarray(vectors, dtype=float))
    if arr.ndim != 2:
        raise ShapeError(f"expected a list of d-vectors, got array of ndim {arr.ndim}")
    n, d = arr.shape
    if d < 2:
        raise ShapeError(f"vectors must have dimension >= 2, got {d}")
    if n != d + 1:
        raise ShapeError(f"expected {d + 1} vectors of dimension {d}, got {n}")
    norms = np.einsum("ij,ij->i", arr, arr)
    if np.any(norms == 0.0):
        i = int(np.argmin(norms))
        raise ZeroLengthBarError(f"edge vector {i} has zero length")
    return _spec_from_array(arr)


def lattice(spec: FrameworkSpec) -> PeriodicityLattice:
    """Periodicity lattice generated by v_i = p_i - p_0."""
    p = spec.edge_vectors
    return PeriodicityLattice(generators=_readonly(p[1:] - p[0]))


def volume(spec: FrameworkSpec) -> float:
    """Oriented volume det[v_1 ... v_d] of the fundamental parallelepiped."""
    p = spec.edge_vectors
    return float(np.linalg.det((p[1:] - p[0]).T))


def generate_patch(spec: FrameworkSpec, repetitions: int) -> Patch:
    """Periodic patch: all translates of the two vertex orbits in [0, repetitions]^d.

    An edge is included iff both endpoint translates lie in the box, so the
    edge count is (d+1) * repetitions^d plus boundary contributions.
    """
    if repetitions < 1:
        raise InputError(f"repetitions must be >= 1, got {repetitions}")
    if spec.is_degenerate:
        raise DegenerateCellError("cannot tile a degenerate cell (volume ~ 0)")
    d = spec.dimension
    p = spec.edge_vectors
    gens = p[1:] - p[0]

    side = repetitions + 1
    grids = np.indices((side,) * d).reshape(d, -1).T  # (side^d, d) multi-indices
    n_box = grids.shape[0]
    origin_pos = grids @ gens
    joint_pos = origin_pos + p[0]

    vertices = np.vstack([origin_pos, joint_pos])
    multi = np.vstack([grids, grids])
    orbits = np.concatenate([np.zeros(n_box, dtype=int), np.ones(n_box, dtype=int)])

    # Map a multi-index to its row in `grids`: mixed-radix key.
    weights = side ** np.arange(d - 1, -1, -1)
    keys = grids @ weights
    index_of = {int(k): i for i, k in enumerate(keys)}

    edges = []
    for row, k in enumerate(grids):
        # edge 0: origin translate k -> p_0 translate k
        edges.append((row, n_box + row))
        # edge i: origin translate k -> p_0 translate k + e_i
        for i in range(d):
            target = k.copy()
            target[i] += 1
            if target[i] > repetitions:
                continue
            edges.append((row, n_box + index_of[int(target @ weights)]))
    return Patch(
        vertices=_readonly(vertices),
        edges=_readonly(np.asarray(edges, dtype=int)).astype(int),
        multi_indices=_readonly(multi).astype(int),
        orbits=_readonly(orbits).astype(int),
    )


def make_reentrant() -> FrameworkSpec:
    """Pointed unit-length planar framework with a reentrant (concave) honeycomb.

    Illustrative stand-in for the classic reentrant honeycomb: three unit bars
    at angles 90, 160 and 20 degrees, leaving a sector larger than pi around
    the joint, which is exactly the auxetic-capable (pointed) condition.
    """
    angles = np.radians([90.0, 160.0, 20.0])
    return make_from_vectors(np.column_stack([np.cos(angles), np.sin(angles)]))


def _factor_psd_rank_d(gram: np.ndarray, d: int, rtol: float = 1e-10):
    """Factor a PSD rank-d (d+1)x(d+1) Gram matrix into d+1 vectors in R^d.

    Eigenvalues in (-1e-12 * max, 0) are clamped to zero so configurations on
    the cone boundary survive roundoff.  Raises if the spectrum is not
    d positive values plus one (near-)zero.
    """
    vals, vecs = np.linalg.eigh(gram)
    top = vals[-1]
    if top <= 0:
        raise RealizationError("matrix has no positive eigenvalue")
    clamp = 1e-12 * top
    vals = np.where((vals > -clamp) & (vals < 0), 0.0, vals)
    if vals[0] < -rtol * top:
        raise RealizationError(
            f"matrix is not positive semidefinite (min eigenvalue {vals[0]:.3e})"
        )
    positive = vals > rtol * top
    if int(np.count_nonzero(positive)) != d:
        raise RealizationError(
            f"expected rank exactly {d}, found {int(np.count_nonzero(positive))}"
        )
    # rows of coords: sqrt(lambda_k) * eigvec_k, one row per kept eigenvalue
    coords = (vecs[:, positive] * np.sqrt(vals[positive])).T
    return coords.T.copy()  # (d+1, d): vector i is row i
