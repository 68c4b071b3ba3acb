"""Diamond-type periodic frameworks: construction, volume critical points,
auxetic deformation paths, and the planar closed forms."""

from .framework import (
    FrameworkSpec,
    Patch,
    PeriodicityLattice,
    generate_patch,
    lattice,
    make_from_vectors,
    make_reentrant,
    make_standard,
    volume,
)
from .gram import (
    bordered_residual,
    canonical_gauge,
    gram_from_omega,
    gram_of,
    omega_of,
    rank_singularity_check,
    realize_from_omega,
)
from .critical import (
    CriticalAlpha,
    CriticalityReport,
    DescentConfig,
    charpoly_eval,
    criticality_report,
    descent_config,
    find_critical_alphas,
    lagrange_multipliers,
    lagrange_residual,
    realize_critical,
    volume_gradient,
)
from .auxetic import (
    CapabilityVerdict,
    TangentVector,
    Trajectory,
    capability_test,
    is_auxetic_direction,
    is_trivial_direction,
    tangent_basis,
    trace_auxetic_path,
)
from .cayley import (
    TopologyReport,
    auxetic_halfspace_test,
    f_cayley,
    g_quartic,
    grad_f,
    pointedness_test,
    topology_probe,
)
from .cli import parse_spec, serialize_spec

__all__ = [name for name in dir() if not name.startswith("_")]
