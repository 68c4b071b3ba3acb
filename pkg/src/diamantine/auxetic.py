"""Auxetic capability and auxetic path tracing.

A one-parameter deformation is auxetic when the derivative of the lattice
Gram matrix omega stays in the positive semidefinite cone.  A configuration
admits a non-trivial auxetic path iff some nonzero tangent direction of the
realizability hypersurface is PSD; since the PSD cone is self-dual under the
trace inner product, this holds iff the hypersurface normal (gradient of the
bordered determinant with off-diagonal partials halved) is NOT definite.
"""

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DegenerateCellError, IncapableError, InputError, OffHypersurfaceError
from .framework import FrameworkSpec, _spec_from_array, volume
from .gram import bordered_matrix, bordered_residual, omega_of

CAPABLE = "capable"
BOUNDARY = "boundary"
INCAPABLE = "incapable"

# smallest |eigenvalue| of the normal below this fraction of its norm is
# treated as the measure-zero transition case
BOUNDARY_RTOL = 1e-9

PSD_TOL = 1e-10  # eigenvalue slack for "is this omega-derivative PSD"


@dataclass(frozen=True)
class TangentVector:
    """Sphere-tangent vertex velocities with the induced omega-derivative."""

    velocities: np.ndarray  # (d+1, d); <p_i, velocity_i> = 0
    omega_dot: np.ndarray   # (d, d) symmetric


@dataclass(frozen=True)
class CapabilityVerdict:
    """Outcome of the auxetic capability test at one configuration."""

    verdict: str
    normal: np.ndarray                 # hypersurface normal in omega coordinates
    normal_eigenvalues: np.ndarray
    certificate: TangentVector | None  # PSD tangent witness when capable
    margin: float                      # best least eigenvalue of a unit tangent


@dataclass(frozen=True)
class TrajectorySample:
    tau: float
    spec: FrameworkSpec
    omega: np.ndarray
    volume: float
    increment_min_eig: float | None  # of omega(tau_k) - omega(tau_{k-1})


@dataclass(frozen=True)
class Trajectory:
    """Discretized deformation path with per-step cone diagnostics."""

    samples: tuple
    stop_reason: str  # completed | capability-lost | degenerate
    policy: str


# ---------------------------------------------------------------------------
# tangent space of the deformation space
# ---------------------------------------------------------------------------

def tangent_basis(spec: FrameworkSpec) -> list[TangentVector]:
    """Orthonormal basis of the quotient tangent space at a configuration.

    Velocities satisfy the sphere constraints <p_i, dp_i> = 0 and are
    orthogonal to every rigid-rotation field dp_i = A p_i (A skew), which
    removes the SO(d) gauge freedom.  The basis has (d+1)d/2 - 1 elements,
    each carrying its induced omega-derivative.
    """
    if spec.is_degenerate:
        raise DegenerateCellError("tangent space undefined at a degenerate cell")
    p = spec.edge_vectors
    d = spec.dimension
    n = d + 1

    # per-sphere orthonormal tangent frames: columns 1..d-1 of a completed QR
    frames = []
    for i in range(n):
        q, _ = np.linalg.qr(p[i].reshape(-1, 1), mode="complete")
        frames.append(q[:, 1:])

    # full sphere-tangent space as flattened orthonormal columns
    full = np.zeros((n * d, n * (d - 1)))
    for i in range(n):
        full[i * d : (i + 1) * d, i * (d - 1) : (i + 1) * (d - 1)] = frames[i]

    # rotation fields dp_i = A p_i for the standard skew generators
    rot = np.zeros((n * d, d * (d - 1) // 2))
    col = 0
    for a in range(d):
        for b in range(a + 1, d):
            field = np.zeros((n, d))
            field[:, a] = p[:, b]
            field[:, b] = -p[:, a]
            rot[:, col] = field.ravel()
            col += 1

    # coefficients of rotation fields in the sphere-tangent frame, then the
    # orthogonal complement of their span
    coeff = full.T @ rot
    u, sing, _ = np.linalg.svd(coeff, full_matrices=True)
    rank = int(np.count_nonzero(sing > 1e-10 * sing[0]))
    complement = u[:, rank:]

    basis = []
    for k in range(complement.shape[1]):
        velocities = (full @ complement[:, k]).reshape(n, d)
        basis.append(TangentVector(velocities=velocities, omega_dot=induced_omega_dot(spec, velocities)))
    return basis


def induced_omega_dot(spec: FrameworkSpec, velocities: np.ndarray) -> np.ndarray:
    """Derivative of omega along vertex velocities: d<v_i, v_j> by product rule."""
    p = spec.edge_vectors
    v = p[1:] - p[0]
    vdot = velocities[1:] - velocities[0]
    return vdot @ v.T + v @ vdot.T


def is_auxetic_direction(tangent: TangentVector) -> bool:
    """True iff the induced omega-derivative lies in the PSD cone (within slack)."""
    w = tangent.omega_dot
    tol = PSD_TOL * max(1.0, float(np.linalg.norm(w)))
    return bool(np.linalg.eigvalsh(w)[0] >= -tol)


def is_trivial_direction(tangent: TangentVector) -> bool:
    """True iff the induced omega-derivative vanishes (pure rotation residue)."""
    return float(np.linalg.norm(tangent.omega_dot)) <= PSD_TOL


# ---------------------------------------------------------------------------
# capability test via the hypersurface normal
# ---------------------------------------------------------------------------

def hypersurface_normal(spec: FrameworkSpec) -> np.ndarray:
    """Normal of the realizability hypersurface at omega, in the trace metric.

    Gradient of the bordered determinant with respect to the omega entries,
    assembled from cofactors, with off-diagonal partials halved so that
    trace(N X) is the directional derivative along a symmetric X.
    """
    omega = omega_of(spec)
    m = bordered_matrix(omega, spec.squared_lengths)
    c = _cofactor_matrix(m)
    d = omega.shape[0]
    normal = c[1:, 1:].copy()
    for i in range(d):
        normal[i, i] = c[i + 1, i + 1] - c[0, i + 1]
    return normal


def capability_test(spec: FrameworkSpec, rng=None) -> CapabilityVerdict:
    """Decide whether a non-trivial auxetic path can start at this configuration.

    The verdict is read off the hypersurface normal N: definite means no
    nonzero PSD tangent exists (incapable); indefinite means one does
    (capable), and a witness tangent maximizing the least eigenvalue of the
    omega-derivative is attached; a singular semidefinite N is the boundary
    case.
    """
    if spec.is_degenerate:
        raise DegenerateCellError("capability test requires a non-degenerate cell")
    omega = omega_of(spec)
    s = spec.squared_lengths
    res = bordered_residual(omega, s)
    if abs(res) > 1e-6 * float(np.prod(s)):
        raise OffHypersurfaceError(f"configuration residual {res:.3e} is off the hypersurface")

    normal = hypersurface_normal(spec)
    eig = np.linalg.eigvalsh(normal)
    norm = float(np.linalg.norm(normal))
    if norm == 0.0 or float(np.min(np.abs(eig))) <= BOUNDARY_RTOL * norm:
        return CapabilityVerdict(BOUNDARY, normal, eig, None, 0.0)
    if eig[0] > 0 or eig[-1] < 0:
        return CapabilityVerdict(INCAPABLE, normal, eig, None, 0.0)

    basis = tangent_basis(spec)
    coeffs, margin = _maximize_least_eigenvalue(basis, rng)
    certificate = _combine(spec, basis, coeffs)
    return CapabilityVerdict(CAPABLE, normal, eig, certificate, margin)


# ---------------------------------------------------------------------------
# path tracing
# ---------------------------------------------------------------------------

def trace_auxetic_path(
    spec: FrameworkSpec,
    steps: int,
    step_size: float,
    policy: str = "max-margin",
    strain_target=None,
    rng=None,
) -> Trajectory:
    """Trace a discretized auxetic path from a capable configuration.

    Each step picks a unit tangent (largest least eigenvalue of the
    omega-derivative by default, or the projection of a prescribed strain
    matrix), advances the edge vectors, and re-normalizes them to their
    sphere radii.  Stops at the step count, on loss of capability, or near a
    degenerate cell.
    """
    if step_size <= 0:
        raise InputError(f"step size must be positive, got {step_size}")
    if steps < 0:
        raise InputError(f"step count must be >= 0, got {steps}")
    if policy not in ("max-margin", "strain"):
        raise InputError(f"unknown steering policy {policy!r}")
    if policy == "strain":
        strain_target = np.asarray(strain_target, dtype=float)
        if strain_target.shape != (spec.dimension, spec.dimension):
            raise InputError(
                f"strain target must be {spec.dimension}x{spec.dimension}, got {strain_target.shape}"
            )

    start = capability_test(spec, rng=rng)
    if start.verdict != CAPABLE:
        raise IncapableError(f"starting configuration is {start.verdict}, not capable")

    radii = np.sqrt(spec.squared_lengths)
    current = spec
    samples = [
        TrajectorySample(0.0, spec, omega_of(spec), volume(spec), None)
    ]
    reason = "completed"
    for k in range(steps):
        tangent = _select_tangent(current, policy, strain_target, rng)
        if tangent is None:
            reason = "capability-lost"
            break
        moved = current.edge_vectors + step_size * tangent.velocities
        moved *= (radii / np.linalg.norm(moved, axis=1))[:, None]
        nxt = _spec_from_array(moved)
        if nxt.is_degenerate:
            reason = "degenerate"
            break
        omega = omega_of(nxt)
        increment = omega - samples[-1].omega
        samples.append(
            TrajectorySample(
                tau=(k + 1) * step_size,
                spec=nxt,
                omega=omega,
                volume=volume(nxt),
                increment_min_eig=float(np.linalg.eigvalsh(increment)[0]),
            )
        )
        current = nxt
    return Trajectory(samples=tuple(samples), stop_reason=reason, policy=policy)


# ---------------------------------------------------------------------------
# internals
# ---------------------------------------------------------------------------

def _cofactor_matrix(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    c = np.empty_like(m)
    for r in range(n):
        rows = np.delete(m, r, axis=0)
        for q in range(n):
            c[r, q] = (-1) ** (r + q) * np.linalg.det(np.delete(rows, q, axis=1))
    return c


def _least_eig(basis, coeffs) -> float:
    w = sum(c * t.omega_dot for c, t in zip(coeffs, basis))
    return float(np.linalg.eigvalsh(w)[0])


def _maximize_least_eigenvalue(basis, rng=None):
    """Best unit combination of basis tangents by least omega_dot eigenvalue.

    Dense sampling of the coefficient sphere followed by local refinement;
    deterministic for a fixed rng seed (and fully deterministic for the
    2-dimensional tangent spaces of planar frameworks).
    """
    m = len(basis)
    if m == 2 and basis[0].omega_dot.shape == (2, 2):
        # planar case: scan the coefficient circle with the closed-form least
        # eigenvalue of a symmetric 2x2 matrix, then polish with Brent
        w1, w2 = basis[0].omega_dot, basis[1].omega_dot

        def least(theta):
            theta = np.asarray(theta)
            a = np.cos(theta)[..., None, None] * w1 + np.sin(theta)[..., None, None] * w2
            mean = 0.5 * (a[..., 0, 0] + a[..., 1, 1])
            rad = np.sqrt(0.25 * (a[..., 0, 0] - a[..., 1, 1]) ** 2 + a[..., 0, 1] ** 2)
            return mean - rad

        thetas = np.linspace(0.0, 2 * np.pi, 1024, endpoint=False)
        vals = least(thetas)
        best = int(np.argmax(vals))
        span = 2 * np.pi / 1024
        res = optimize.minimize_scalar(
            lambda t: -float(least(t)),
            bounds=(thetas[best] - span, thetas[best] + span),
            method="bounded",
            options={"xatol": 1e-12},
        )
        theta = float(res.x)
        if float(least(theta)) < float(vals[best]):
            theta = float(thetas[best])
        coeffs = np.array([np.cos(theta), np.sin(theta)])
        return coeffs, float(least(theta))

    if rng is None:
        rng = np.random.default_rng(0)
    candidates = rng.normal(size=(256, m))
    candidates = np.vstack([candidates, np.eye(m), -np.eye(m)])
    candidates /= np.linalg.norm(candidates, axis=1)[:, None]
    vals = np.array([_least_eig(basis, c) for c in candidates])
    start = candidates[int(np.argmax(vals))]

    def objective(c):
        norm = np.linalg.norm(c)
        if norm < 1e-12:
            return 1e300
        return -_least_eig(basis, c / norm)

    res = optimize.minimize(objective, start, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
    coeffs = res.x / np.linalg.norm(res.x)
    value = _least_eig(basis, coeffs)
    if value < np.max(vals):
        coeffs = start
        value = float(np.max(vals))
    return coeffs, value


def _combine(spec, basis, coeffs) -> TangentVector:
    velocities = sum(c * t.velocities for c, t in zip(coeffs, basis))
    return TangentVector(velocities=velocities, omega_dot=induced_omega_dot(spec, velocities))


def _select_tangent(spec, policy, strain_target, rng):
    basis = tangent_basis(spec)
    if policy == "max-margin":
        coeffs, margin = _maximize_least_eigenvalue(basis, rng)
        if margin <= PSD_TOL:
            return None
        return _combine(spec, basis, coeffs)

    # strain policy: trace-orthogonal projection of the target onto the span
    k = np.array([[np.sum(a.omega_dot * b.omega_dot) for b in basis] for a in basis])
    b = np.array([np.sum(t.omega_dot * strain_target) for t in basis])
    coeffs = np.linalg.solve(k, b)
    norm = float(np.linalg.norm(coeffs))
    if norm < 1e-12:
        return None
    tangent = _combine(spec, basis, coeffs / norm)
    if not is_auxetic_direction(tangent) or is_trivial_direction(tangent):
        return None
    return tangent
