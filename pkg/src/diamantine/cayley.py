"""Closed forms for planar (d = 2) frameworks with unit edge lengths.

In omega-coordinates (w11, w12, w22) the realizability surface of the
unit-length planar framework is a Cayley nodal cubic; auxetic capability is
cut out by a quartic (the determinant of the halved-gradient normal), which
inside the positive definite cone reduces to a half-space condition and,
back in terms of the edge vectors, to pointedness of the configuration.
"""

from dataclasses import dataclass

import numpy as np

from .auxetic import BOUNDARY, CAPABLE, INCAPABLE
from .critical import POSITIVE_SADDLE_CANDIDATE, find_critical_alphas
from .errors import InputError, OffHypersurfaceError, ConeViolationError, UnsupportedLengthsError
from .framework import FrameworkSpec

POINTED = "pointed"
NOT_POINTED = "not-pointed"

#: the four nodal singularities of the cubic
NODES = ((0.0, 0.0, 0.0), (4.0, 0.0, 0.0), (0.0, 0.0, 4.0), (4.0, 4.0, 4.0))


def f_cayley(w):
    """Cubic whose zero set is the unit-length realizability surface."""
    w11, w12, w22 = w
    return 0.25 * w11 * w22 * (2.0 * w12 - w11 - w22) + w11 * w22 - w12 * w12


def grad_f(w):
    """Gradient of the cubic; vanishes exactly at the four nodes."""
    w11, w12, w22 = w
    return np.array(
        [
            w22 * (0.5 * w12 - 0.5 * w11 - 0.25 * w22 + 1.0),
            0.5 * w11 * w22 - 2.0 * w12,
            w11 * (0.5 * w12 - 0.5 * w22 - 0.25 * w11 + 1.0),
        ]
    )


def g_quartic(w):
    """Quartic boundary of the auxetic-capable region on the cubic.

    Equals the determinant of the halved-gradient normal, so it is negative
    exactly where the normal is indefinite.  On w12 = 0 it factors as
    w11 w22 (w11 + w22 - 4)(w11 + w22 - 2) / 8.
    """
    w11, w12, w22 = w
    return (
        w11
        * w22
        * (0.5 * w12 - 0.5 * w11 - 0.25 * w22 + 1.0)
        * (0.5 * w12 - 0.5 * w22 - 0.25 * w11 + 1.0)
        - (0.25 * w11 * w22 - w12) ** 2
    )


def auxetic_halfspace_test(w, tol: float = 1e-9) -> str:
    """Capability of a unit-length planar framework from its omega point.

    Capable iff w11 - w12 + w22 < 4 (strictly, within tol); requires the point
    to lie on the cubic and inside the positive definite cone.
    """
    w11, w12, w22 = (float(x) for x in w)
    scale = (1.0 + max(abs(w11), abs(w12), abs(w22))) ** 3
    if abs(f_cayley((w11, w12, w22))) > 1e-6 * scale:
        raise OffHypersurfaceError("omega point does not lie on the cubic")
    if w11 + w22 <= 0 or w11 * w22 - w12 * w12 <= 0:
        raise ConeViolationError("omega point is not positive definite")
    value = w11 - w12 + w22
    if abs(value - 4.0) <= tol:
        return BOUNDARY
    return CAPABLE if value < 4.0 else INCAPABLE


def pointedness_test(spec: FrameworkSpec, tol: float = 1e-9) -> str:
    """Pointedness of a unit-length planar configuration.

    Pointed iff the inner products satisfy <p0,p1> + <p1,p2> + <p2,p0> > -1,
    equivalently iff some open half-plane through the origin contains all
    three edge vectors (one sector angle exceeds pi).  Pointedness is exactly
    auxetic capability for these frameworks.
    """
    if spec.dimension != 2:
        raise UnsupportedLengthsError("pointedness closed form requires d = 2")
    if np.max(np.abs(spec.squared_lengths - 1.0)) > 1e-9:
        raise UnsupportedLengthsError("pointedness closed form requires unit lengths")
    p = spec.edge_vectors
    total = float(p[0] @ p[1] + p[1] @ p[2] + p[2] @ p[0])
    if abs(total + 1.0) <= tol:
        return BOUNDARY
    return POINTED if total > -1.0 else NOT_POINTED


# ---------------------------------------------------------------------------
# torus sampling of the deformation surface
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusSample:
    """Angles of p_0 and p_1 relative to the pinned p_2, with degeneracy flag."""

    phi0: float
    phi1: float
    degenerate: bool


@dataclass(frozen=True)
class TopologyReport:
    """Connected components of the sampled deformation surface."""

    component_count: int
    euler_characteristics: tuple
    cell_counts: tuple
    saddle_present: bool
    grid: int


def torus_point(squared_lengths, phi0: float, phi1: float):
    """Configuration at given torus angles; p_2 is pinned to the first axis.

    Returns the framework together with its TorusSample (degenerate when the
    three endpoints are collinear, i.e. V = 0).
    """
    from .framework import make_from_vectors

    r = np.sqrt(np.asarray(squared_lengths, dtype=float))
    if r.shape != (3,):
        raise InputError(f"planar torus chart needs 3 squared lengths, got {r.shape}")
    vectors = np.array(
        [
            [r[0] * np.cos(phi0), r[0] * np.sin(phi0)],
            [r[1] * np.cos(phi1), r[1] * np.sin(phi1)],
            [r[2], 0.0],
        ]
    )
    spec = make_from_vectors(vectors)
    return spec, TorusSample(phi0=float(phi0), phi1=float(phi1), degenerate=spec.is_degenerate)


class UnionFind:
    """Union-find with path halving over a fixed range of cell ids."""

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def torus_volume_samples(squared_lengths, grid: int) -> np.ndarray:
    """Cell volume V on the angle torus, with p_2 pinned to the first axis."""
    r = np.sqrt(np.asarray(squared_lengths, dtype=float))
    phi = 2.0 * np.pi * np.arange(grid) / grid
    phi0, phi1 = np.meshgrid(phi, phi, indexing="ij")
    p0x, p0y = r[0] * np.cos(phi0), r[0] * np.sin(phi0)
    p1x, p1y = r[1] * np.cos(phi1), r[1] * np.sin(phi1)
    p2x, p2y = r[2], 0.0
    return (p1x - p0x) * (p2y - p0y) - (p1y - p0y) * (p2x - p0x)


def topology_probe(squared_lengths, grid: int = 512) -> TopologyReport:
    """Count components of the deformation surface and probe for the saddle.

    The angle torus is sampled on a grid; cells whose corners straddle (or
    touch) the degenerate locus V = 0 are cut out, and the remaining cells
    are merged by union-find with torus wraparound.  The Euler characteristic
    of each component distinguishes discs (1) from cylinders (0).  The saddle
    flag reports whether the critical-point equation has a simple smallest
    positive root.
    """
    s = np.sort(np.asarray(squared_lengths, dtype=float))
    if s.shape != (3,):
        raise InputError(f"planar probe needs exactly 3 squared lengths, got {s.shape}")
    if grid < 64:
        raise InputError(f"grid must be >= 64, got {grid}")

    vol = torus_volume_samples(s, grid)
    sign = np.sign(vol)
    sign[np.abs(vol) <= 1e-12 * np.max(np.abs(vol))] = 0.0

    # a cell is cut when its four corners (with wraparound) do not share one
    # strict sign
    c00 = sign
    c10 = np.roll(sign, -1, axis=0)
    c01 = np.roll(sign, -1, axis=1)
    c11 = np.roll(np.roll(sign, -1, axis=0), -1, axis=1)
    corners = np.stack([c00, c10, c01, c11])
    kept = (np.abs(corners.sum(axis=0)) == 4.0)

    uf = UnionFind(grid * grid)
    kept_flat = kept.ravel()
    idx = np.arange(grid * grid).reshape(grid, grid)
    right = np.roll(idx, -1, axis=0)
    up = np.roll(idx, -1, axis=1)
    for a, b in zip(idx.ravel(), right.ravel()):
        if kept_flat[a] and kept_flat[b]:
            uf.union(int(a), int(b))
    for a, b in zip(idx.ravel(), up.ravel()):
        if kept_flat[a] and kept_flat[b]:
            uf.union(int(a), int(b))

    groups: dict[int, list[int]] = {}
    for cell in np.flatnonzero(kept_flat):
        groups.setdefault(uf.find(int(cell)), []).append(int(cell))
    components = sorted(groups.values(), key=lambda cells: (-len(cells), cells[0]))

    characteristics = tuple(_euler_characteristic(np.asarray(cells), grid) for cells in components)
    saddle = any(
        a.kind == POSITIVE_SADDLE_CANDIDATE for a in find_critical_alphas(s)
    )
    return TopologyReport(
        component_count=len(components),
        euler_characteristics=characteristics,
        cell_counts=tuple(len(cells) for cells in components),
        saddle_present=saddle,
        grid=grid,
    )


def _euler_characteristic(cells: np.ndarray, grid: int) -> int:
    """V - E + F of the closed cell complex spanned by the given torus cells."""
    i, j = cells // grid, cells % grid
    i1, j1 = (i + 1) % grid, (j + 1) % grid
    faces = cells.size
    corner_ids = np.concatenate([i * grid + j, i1 * grid + j, i * grid + j1, i1 * grid + j1])
    vertices = np.unique(corner_ids).size
    # edges along the first axis live at (i, j) and (i, j1); along the second
    # at (i, j) and (i1, j); offset the second family by grid^2
    edge_ids = np.concatenate(
        [
            i * grid + j,
            i * grid + j1,
            grid * grid + i * grid + j,
            grid * grid + i1 * grid + j,
        ]
    )
    edges = np.unique(edge_ids).size
    return int(vertices - edges + faces)
