"""Böttcher-type coordinates for quasiregular stretched quadratic maps.

The map under study is f(z) = h(z)^2 + c where h is a planar stretch
by K >= 1 along the direction theta.  The package constructs a
conjugacy psi with psi(f(z)) = psi(z)^2 + ... failure near infinity,
extends it over the escaping set by pullback, locates the invariant
rays of the stretch, and tracks how the dilatation of the iterates
grows along them.
"""

from .affine import StretchParams, apply_stretch, inverse_stretch, normalize_omega, stretch_dilatation
from .bottcher import (
    BottcherCoordinate,
    SolverConfig,
    build_coordinate,
    conjugacy_residual,
    default_config,
    log_coordinate,
    psi,
    psi_dilatation_estimate,
    psi_inverse,
)
from .dilatation import (
    DiskMobius,
    FixedRay,
    cos_phi_lower_bound,
    distortion_growth,
    fixed_ray,
    fixed_rays,
    mobius_A,
    mu_fixed_ray,
    mu_iterate_general,
    ray_angle_defect,
    trace_sq,
)
from .errors import (
    BranchAmbiguityError,
    BranchPointError,
    ConfigError,
    DegenerateDerivativeError,
    HalfPlaneError,
    InconclusiveOrbitError,
    MultipleRootsError,
    NoConvergenceError,
    NotInEscapingSetError,
    OutsideDomainError,
)
from .extension import ExtensionDomain, extend_psi, extension_domain_probe, pullback_psi
from .field import EscapeField, GridSpec, render_dilatation, render_escape
from .qamap import Connectivity, OrbitResult, OrbitStatus, QAMap, classify_N, orbit
from .verify import run_verify

__version__ = "0.1.0"

__all__ = [
    "StretchParams", "apply_stretch", "inverse_stretch", "normalize_omega",
    "stretch_dilatation",
    "QAMap", "OrbitStatus", "OrbitResult", "orbit", "Connectivity", "classify_N",
    "SolverConfig", "default_config", "build_coordinate", "BottcherCoordinate",
    "psi", "psi_inverse", "log_coordinate", "conjugacy_residual",
    "psi_dilatation_estimate",
    "extend_psi", "pullback_psi", "ExtensionDomain", "extension_domain_probe",
    "FixedRay", "fixed_ray", "fixed_rays", "ray_angle_defect",
    "mu_iterate_general", "mu_fixed_ray", "DiskMobius", "mobius_A",
    "trace_sq", "cos_phi_lower_bound", "distortion_growth",
    "GridSpec", "EscapeField", "render_escape", "render_dilatation",
    "run_verify",
    "HalfPlaneError", "OutsideDomainError", "NoConvergenceError",
    "NotInEscapingSetError", "BranchAmbiguityError", "BranchPointError",
    "MultipleRootsError", "DegenerateDerivativeError", "InconclusiveOrbitError",
    "ConfigError",
    "__version__",
]
