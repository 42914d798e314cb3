"""Geodesic X-ray transform on simple constant-curvature disks.

Numerical forward and adjoint transforms by geodesic quadrature, disk and
boundary spectral analysis in Zernike-type bases, the degenerate-elliptic
operator diagonalized by the basis, exact and filtered spectral inversion,
and a verification harness that checks the closed-form operator identities
against independent quadrature.
"""

from .errors import (
    FileFormatError,
    FilterOverflow,
    GxrError,
    InterpolationClampWarning,
    KernelLeakWarning,
    ModelMismatch,
    NonpositiveRadius,
    OutOfDisk,
    ResolutionTooLow,
    SimplicityViolation,
    SingularOrigin,
    TangentRay,
)
from .geometry import (
    DiskModel,
    FanBeamCoord,
    GeodesicArc,
    PhasePoint,
    antipodal_scattering,
    conformal_weight,
    exit_time,
    footpoint,
    footpoint_phase,
    geodesic,
    make_model,
    phi_inverse,
    phi_map,
    psi_map,
    s_inverse,
    s_map,
    s_prime,
    scattering,
)

__version__ = "0.1.0"
