"""Critical points of the cell volume over the product of spheres.

At a critical point all pairwise inner products <p_i, p_j> (i != j) share a
common value, which must be a root of the degree-(d+1) determinant equation
for the matrix with diagonal s_i and constant off-diagonal entries.  For
sorted distinct s there is exactly one root in each (s_i, s_{i+1}) plus a
single negative root; the negative root realizes the volume maximum and the
smallest positive root, when simple, realizes a saddle.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError, SaddleRequiredError
from .framework import FrameworkSpec, volume
from .gram import factor_gram

NEGATIVE_EXTREMUM = "negative-extremum"
POSITIVE_SADDLE_CANDIDATE = "positive-saddle-candidate"
POSITIVE_NONREALIZABLE = "positive-nonrealizable"
MULTIPLE_ROOT = "multiple-root"

TIE_RTOL = 1e-12       # squared lengths closer than this are one cluster
BISECT_RTOL = 1e-13    # bracket width target, relative to max(s)
POLE_RTOL = 1e-8       # switch to direct determinant this close to some s_i


@dataclass(frozen=True)
class CriticalAlpha:
    """One root of the critical-point equation, with bracket and classification."""

    value: float
    kind: str
    bracket: tuple
    multiplicity: int


@dataclass(frozen=True)
class LagrangeData:
    """Multipliers lambda_i with the residual that certifies criticality."""

    values: np.ndarray
    residual: float
    critical: bool


@dataclass(frozen=True)
class DescentConfig:
    """Split p_i = mu p_0 + q_i with q_i orthogonal to p_0, at a saddle."""

    mu: float
    q: np.ndarray  # (d, d): row i is q_{i+1}


@dataclass(frozen=True)
class CriticalityReport:
    """All roots plus realized extremum/saddle configurations and multipliers."""

    alphas: tuple
    max_config: FrameworkSpec
    max_volume: float
    max_multipliers: np.ndarray
    saddle_config: FrameworkSpec | None
    saddle_multipliers: np.ndarray | None


def charpoly_eval(alpha: float, squared_lengths) -> float:
    """Determinant of the matrix with diagonal s and off-diagonal alpha.

    Away from the poles alpha = s_i the stable product form
    prod(s_i - alpha) * (1 + alpha * sum 1/(s_i - alpha)) is used; near a pole
    the determinant is evaluated directly.
    """
    s = np.asarray(squared_lengths, dtype=float)
    alpha = float(alpha)
    gaps = s - alpha
    if np.min(np.abs(gaps)) > POLE_RTOL * np.max(s):
        return float(np.prod(gaps) * (1.0 + alpha * np.sum(1.0 / gaps)))
    m = np.full((s.size, s.size), alpha)
    np.fill_diagonal(m, s)
    return float(np.linalg.det(m))


def find_critical_alphas(squared_lengths) -> list[CriticalAlpha]:
    """Isolate and classify every real root of the critical-point equation.

    Requires s sorted ascending and positive.  Roots are bracketed by the
    interlacing structure (one per gap between distinct values, one negative)
    and refined by bisection; a repeated value s appearing m times is itself a
    root of multiplicity m - 1.
    """
    s = np.asarray(squared_lengths, dtype=float)
    if s.ndim != 1 or s.size < 3:
        raise InputError(f"need at least 3 squared lengths, got shape {s.shape}")
    if np.any(s <= 0):
        raise InputError("squared lengths must be positive")
    if np.any(np.diff(s) < 0):
        raise InputError("squared lengths must be sorted ascending")

    values, counts = _clusters(s)
    scale = float(s[-1])

    def reduced(alpha: float) -> float:
        # full charpoly divided by prod (t_j - alpha)^(m_j - 1); polynomial in
        # alpha, safe at the repeated roots
        gaps = values - alpha
        total = np.prod(gaps)
        for j in range(values.size):
            total += alpha * counts[j] * np.prod(np.delete(gaps, j))
        return float(total)

    roots: list[CriticalAlpha] = []

    # unique negative root: reduced(0) > 0, reduced(-inf) < 0
    lo = -scale
    while reduced(lo) > 0:
        lo *= 2.0
    neg = _bisect(reduced, lo, 0.0, scale)
    roots.append(CriticalAlpha(neg[0], NEGATIVE_EXTREMUM, neg[1], 1))

    # one root strictly between consecutive distinct values
    gap_roots = []
    for j in range(values.size - 1):
        a, b = float(values[j]), float(values[j + 1])
        root = _bisect(reduced, a, b, scale)
        gap_roots.append(root)

    first_simple = counts[0] == 1
    positive: list[CriticalAlpha] = []
    for j in range(values.size):
        if counts[j] > 1:
            t = float(values[j])
            positive.append(CriticalAlpha(t, POSITIVE_NONREALIZABLE, (t, t), int(counts[j]) - 1))
        if j < len(gap_roots):
            positive.append(
                CriticalAlpha(gap_roots[j][0], POSITIVE_NONREALIZABLE, gap_roots[j][1], 1)
            )
    positive.sort(key=lambda r: r.value)
    if positive:
        smallest = positive[0]
        kind = POSITIVE_SADDLE_CANDIDATE if first_simple else MULTIPLE_ROOT
        positive[0] = CriticalAlpha(smallest.value, kind, smallest.bracket, smallest.multiplicity)
    roots.extend(positive)
    return roots


def realize_critical(alpha: CriticalAlpha, squared_lengths) -> FrameworkSpec:
    """Realize the configuration with all pairwise inner products equal to the root.

    Only the negative extremum and the saddle candidate are realizable; their
    Gram matrix (diagonal s, off-diagonal alpha) is PSD of rank d and factors
    into d+1 vectors.  The negative root attains the maximal cell volume.
    """
    if alpha.kind not in (NEGATIVE_EXTREMUM, POSITIVE_SADDLE_CANDIDATE):
        raise InputError(f"root of kind {alpha.kind!r} is not realizable")
    s = np.asarray(squared_lengths, dtype=float)
    gram = np.full((s.size, s.size), alpha.value)
    np.fill_diagonal(gram, s)
    return factor_gram(gram, s.size - 1)


def volume_gradient(spec: FrameworkSpec) -> np.ndarray:
    """Analytic gradient of the cell volume with respect to each edge vector.

    Row i is the cofactor vector of column i in the (d+1)x(d+1) bordered form
    of the volume determinant (an all-ones row over the edge vectors).
    """
    p = spec.edge_vectors
    d = spec.dimension
    m = np.vstack([np.ones(d + 1), p.T])  # (d+1, d+1)
    grad = np.empty((d + 1, d))
    for i in range(d + 1):
        cols = np.delete(m, i, axis=1)
        for k in range(d):
            minor = np.delete(cols, k + 1, axis=0)
            grad[i, k] = (-1) ** (k + 1 + i) * np.linalg.det(minor)
    return grad


def lagrange_residual(spec: FrameworkSpec) -> float:
    """Largest relative component of the volume gradient transverse to each p_i.

    Zero exactly at critical points of the volume on the product of spheres.
    """
    p = spec.edge_vectors
    grad = volume_gradient(spec)
    radial = np.einsum("ij,ij->i", grad, p) / spec.squared_lengths
    tangential = grad - radial[:, None] * p
    norms = np.linalg.norm(grad, axis=1)
    norms = np.maximum(norms, 1e-300)
    return float(np.max(np.linalg.norm(tangential, axis=1) / norms))


def lagrange_multipliers(spec: FrameworkSpec, residual_tol: float = 1e-8) -> LagrangeData:
    """Multipliers lambda_i = <grad_i V, p_i> / s_i; sum lambda_i s_i = d V."""
    grad = volume_gradient(spec)
    lam = np.einsum("ij,ij->i", grad, spec.edge_vectors) / spec.squared_lengths
    res = lagrange_residual(spec)
    return LagrangeData(values=lam, residual=res, critical=res <= residual_tol)


def descent_config(spec: FrameworkSpec, tol: float = 1e-8) -> DescentConfig:
    """Split a saddle configuration as p_i = mu p_0 + q_i with <p_0, q_i> = 0.

    Requires a realized saddle: all off-diagonal inner products equal to a
    simple smallest positive root with s_0 < s_1.  The q_i then satisfy
    <q_i, q_j> = alpha (1 - alpha/s_0) < 0 and <q_i, q_i> = s_i - alpha^2/s_0 > 0.
    """
    p = spec.edge_vectors
    s = spec.squared_lengths
    gram = p @ p.T
    off = gram[np.triu_indices(s.size, k=1)]
    alpha = float(off[0])
    scale = float(np.max(s))
    if np.max(np.abs(off - alpha)) > tol * scale:
        raise SaddleRequiredError("pairwise inner products are not all equal")
    s_sorted = np.sort(s)
    if not (s_sorted[0] + TIE_RTOL * scale < s_sorted[1]):
        raise SaddleRequiredError("saddle requires s_0 < s_1")
    lo, hi = float(s_sorted[0]), float(np.sqrt(s_sorted[0] * s_sorted[1]))
    if not (lo < alpha < hi):
        raise SaddleRequiredError(
            f"common inner product {alpha:.6g} is not a smallest positive root in ({lo:.6g}, {hi:.6g})"
        )
    mu = alpha / float(s[0])
    q = p[1:] - mu * p[0]
    return DescentConfig(mu=mu, q=q)


def criticality_report(squared_lengths) -> CriticalityReport:
    """Roots, realized extremum and saddle (when present), and their multipliers."""
    s = np.asarray(squared_lengths, dtype=float)
    alphas = find_critical_alphas(s)
    negative = next(a for a in alphas if a.kind == NEGATIVE_EXTREMUM)
    max_config = realize_critical(negative, s)
    saddle = next((a for a in alphas if a.kind == POSITIVE_SADDLE_CANDIDATE), None)
    saddle_config = realize_critical(saddle, s) if saddle is not None else None
    return CriticalityReport(
        alphas=tuple(alphas),
        max_config=max_config,
        max_volume=abs(volume(max_config)),
        max_multipliers=lagrange_multipliers(max_config).values,
        saddle_config=saddle_config,
        saddle_multipliers=(
            lagrange_multipliers(saddle_config).values if saddle_config is not None else None
        ),
    )


def _clusters(s: np.ndarray):
    """Group sorted values that agree to TIE_RTOL relative into (values, counts)."""
    scale = float(s[-1])
    values, counts = [float(s[0])], [1]
    for x in s[1:]:
        if abs(x - values[-1]) <= TIE_RTOL * scale:
            counts[-1] += 1
        else:
            values.append(float(x))
            counts.append(1)
    return np.asarray(values), np.asarray(counts, dtype=int)


def _bisect(fn, lo: float, hi: float, scale: float):
    """Bisection on a guaranteed sign change in (lo, hi); returns (root, bracket)."""
    flo, fhi = fn(lo), fn(hi)
    if flo == 0.0:
        return lo, (lo, lo)
    if fhi == 0.0:
        return hi, (hi, hi)
    if (flo > 0) == (fhi > 0):
        raise InputError(f"no sign change on bracket ({lo:.6g}, {hi:.6g})")
    a, b = lo, hi
    while b - a > BISECT_RTOL * scale:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fmid = fn(mid)
        if fmid == 0.0:
            return mid, (a, b)
        if (fmid > 0) == (flo > 0):
            a = mid
        else:
            b = mid
    return 0.5 * (a + b), (a, b)
