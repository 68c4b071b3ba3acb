"""Matplotlib figures saved alongside the CLI's delimited/JSON outputs."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import LineCollection

from .cayley import torus_volume_samples
from .critical import charpoly_eval
from .framework import generate_patch


def save_analyze_figure(spec, report, path: str) -> None:
    """Geometry (planar case) next to the critical-point determinant curve."""
    fig, axes = plt.subplots(1, 2, figsize=(10, 4.2))

    ax = axes[0]
    if spec.dimension == 2 and not spec.is_degenerate:
        patch = generate_patch(spec, 2)
        segs = [
            [patch.vertices[a], patch.vertices[b]] for a, b in patch.edges
        ]
        ax.add_collection(LineCollection(segs, colors="0.2", linewidths=1.5))
        ax.scatter(*patch.vertices.T, c=np.where(patch.orbits == 0, "tab:blue", "tab:red"), s=12, zorder=3)
        ax.set_aspect("equal")
        ax.autoscale()
        ax.set_title("periodic patch (2 repetitions)")
    else:
        ax.axis("off")
        ax.text(0.5, 0.5, f"d = {spec.dimension}\n(no planar drawing)", ha="center", va="center")

    ax = axes[1]
    s = np.sort(spec.squared_lengths)
    roots = [a["value"] for a in report["critical_alphas"]]
    lo = min(roots) - 0.3 * s[-1]
    hi = s[-1] * 1.15
    grid = np.linspace(lo, hi, 600)
    vals = np.array([charpoly_eval(a, s) for a in grid])
    ax.plot(grid, vals, color="tab:blue")
    ax.axhline(0.0, color="0.6", lw=0.8)
    ax.plot(roots, [0.0] * len(roots), "o", color="tab:red", ms=5)
    for x in s:
        ax.axvline(x, color="0.85", lw=0.8, zorder=0)
    ax.set_xlabel("common inner product")
    ax.set_ylabel("determinant")
    ax.set_title(f"critical-point equation ({report['capability']['verdict']})")

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_trace_figure(trajectory, path: str) -> None:
    """Cell volume and cone margin along a traced auxetic path."""
    taus = [s.tau for s in trajectory.samples]
    vols = [abs(s.volume) for s in trajectory.samples]
    incs = [s.increment_min_eig for s in trajectory.samples[1:]]

    fig, axes = plt.subplots(1, 2, figsize=(10, 3.8))
    axes[0].plot(taus, vols, color="tab:blue")
    axes[0].set_xlabel("path parameter")
    axes[0].set_ylabel("|cell volume|")
    axes[0].set_title("volume along the path")

    if incs:
        axes[1].plot(taus[1:], incs, color="tab:green")
    axes[1].axhline(0.0, color="0.6", lw=0.8)
    axes[1].set_xlabel("path parameter")
    axes[1].set_ylabel("min eigenvalue of omega increment")
    axes[1].set_title(f"cone margin per step (stop: {trajectory.stop_reason})")

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_topology_figure(squared_lengths, report, path: str) -> None:
    """Sign of the cell volume over the angle torus, degenerate locus in white."""
    s = np.sort(np.asarray(squared_lengths, dtype=float))
    vol = torus_volume_samples(s, report.grid)
    shown = np.sign(vol)
    shown[np.abs(vol) <= 1e-12 * np.max(np.abs(vol))] = 0.0

    fig, ax = plt.subplots(figsize=(4.8, 4.4))
    ax.imshow(
        shown.T,
        origin="lower",
        extent=(0, 2 * np.pi, 0, 2 * np.pi),
        cmap="RdBu",
        vmin=-1.4,
        vmax=1.4,
        interpolation="nearest",
    )
    chis = ", ".join(str(c) for c in report.euler_characteristics)
    ax.set_xlabel("angle of p0")
    ax.set_ylabel("angle of p1")
    ax.set_title(
        f"components: {report.component_count} (chi: {chis}), saddle: {report.saddle_present}"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
