"""Constant-curvature disk geometry: geodesics, footpoints, scattering.

The disk of radius ``R`` carries the conformal metric
``(1 + kappa*|z|^2)^(-2) |dz|^2`` of Gauss curvature ``4*kappa``.  The
condition ``R^2*|kappa| < 1`` keeps the disk simple: strictly convex
boundary, no trapped geodesics, no conjugate points.  Geodesics entering
at the boundary point ``R*exp(i*beta)`` with angle ``alpha`` to the inner
normal (``|alpha| < pi/2``) are Moebius arcs with a closed-form exit
parameter, so every map below is explicit; the only root solve is a
quadratic, done on paper.

Everything is vectorized over numpy arrays and pure: models and arcs are
frozen after construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonpositiveRadius, OutOfDisk, SimplicityViolation, TangentRay

TWO_PI = 2.0 * np.pi

# Absolute slack for "is this point inside the disk" checks.
_DISK_TOL = 1e-12
# Below this Moebius exit parameter a ray is treated as tangent.
_TANGENT_TOL = 1e-14


def wrap_angle(angle):
    """Wrap an angle (or array of angles) into [0, 2*pi)."""
    return np.mod(angle, TWO_PI)


def angle_gap(a, b):
    """Signed difference a - b wrapped into (-pi, pi]."""
    d = np.mod(np.asarray(a) - np.asarray(b) + np.pi, TWO_PI) - np.pi
    return np.where(d == -np.pi, np.pi, d)


@dataclass(frozen=True)
class DiskModel:
    """A simple geodesic disk of constant curvature.

    Attributes
    ----------
    kappa : float
        Curvature parameter; the Gauss curvature is 4*kappa.
    radius : float
        Disk radius R > 0.
    lam : float
        kappa * R**2, the single dimensionless parameter most formulas use.
    c_const : float
        4*pi*R / (1 - kappa*R**2); the constant of the normal-operator
        identity and the scale of the singular values.
    measure_factor : float
        R / (1 + kappa*R**2); density of the boundary area form relative
        to d(beta) d(alpha).
    """

    kappa: float
    radius: float
    lam: float
    c_const: float
    measure_factor: float

    @property
    def is_flat(self) -> bool:
        return self.kappa == 0.0

    def __repr__(self) -> str:  # compact, used in verification reports
        return f"DiskModel(kappa={self.kappa:g}, radius={self.radius:g})"


def make_model(kappa: float, radius: float) -> DiskModel:
    """Validate (kappa, radius) and build a model with derived constants.

    Raises
    ------
    NonpositiveRadius
        If radius <= 0.
    SimplicityViolation
        If radius**2 * |kappa| >= 1.
    """
    kappa = float(kappa)
    radius = float(radius)
    if not radius > 0.0:
        raise NonpositiveRadius(f"radius must be > 0, got {radius}")
    lam = kappa * radius**2
    if abs(lam) >= 1.0:
        raise SimplicityViolation(
            f"need radius**2*|kappa| < 1 for a simple disk, got {abs(lam)}"
        )
    return DiskModel(
        kappa=kappa,
        radius=radius,
        lam=lam,
        c_const=4.0 * np.pi * radius / (1.0 - lam),
        measure_factor=radius / (1.0 + lam),
    )


@dataclass(frozen=True)
class FanBeamCoord:
    """Entry data of a transversal geodesic: boundary angle and normal angle."""

    beta: float
    alpha: float


@dataclass(frozen=True)
class PhasePoint:
    """An interior point with a direction: (rho*exp(i*omega), theta)."""

    rho: float
    omega: float
    theta: float


# ---------------------------------------------------------------------------
# The boundary reparameterization s and the disk maps Phi, Psi
# ---------------------------------------------------------------------------


def _s_like(lam_ratio, alpha):
    """atan(lam_ratio * tan(alpha)) on the principal branch, extended so the
    map is continuous, odd, increasing and commutes with alpha -> alpha + pi."""
    a = np.asarray(alpha, dtype=float)
    m = np.round(a / np.pi)
    a0 = a - m * np.pi  # in [-pi/2, pi/2]
    out = np.arctan2(lam_ratio * np.sin(a0), np.cos(a0)) + m * np.pi
    return out if out.ndim else float(out)


def s_map(model: DiskModel, alpha):
    """Boundary angle reparameterization fixing 0 and +-pi/2.

    For the flat disk this is the identity; in general it is the strictly
    increasing odd map with slope (1-lam)/(1+lam) at 0 that carries entry
    angles of curved geodesics to entry angles of straight chords.
    """
    r = (1.0 - model.lam) / (1.0 + model.lam)
    return _s_like(r, alpha)


def s_inverse(model: DiskModel, alpha):
    """Inverse of :func:`s_map`."""
    r = (1.0 + model.lam) / (1.0 - model.lam)
    return _s_like(r, alpha)


def s_prime(model: DiskModel, alpha):
    """Derivative of :func:`s_map`; even, pi-periodic, positive."""
    r = (1.0 - model.lam) / (1.0 + model.lam)
    c, s = np.cos(alpha), np.sin(alpha)
    return r / (c * c + r * r * s * s)


def conformal_weight(model: DiskModel, rho):
    """The positive weight w(z) = (1 + kappa|z|^2)/(1 - kappa|z|^2)."""
    q = model.kappa * np.asarray(rho, dtype=float) ** 2
    return (1.0 + q) / (1.0 - q)


def phi_radial(model: DiskModel, rho):
    """Radial profile of the disk diffeomorphism onto the unit disk."""
    rho = np.asarray(rho, dtype=float)
    return (1.0 - model.lam) / (1.0 - model.kappa * rho**2) * rho / model.radius


def phi_inverse_radial(model: DiskModel, rho_unit):
    """Inverse of :func:`phi_radial`, mapping [0, 1] back onto [0, R].

    Root of kappa*R*r' * rho^2 + (1-lam) * rho - R*r' = 0 written in the
    cancellation-free form 2*R*r' / ((1-lam) + sqrt((1-lam)^2 + 4*lam*r'^2)),
    valid for every admissible kappa including 0.
    """
    rp = np.asarray(rho_unit, dtype=float)
    b = 1.0 - model.lam
    disc = b * b + 4.0 * model.lam * rp * rp
    return 2.0 * model.radius * rp / (b + np.sqrt(disc))


def _check_in_disk(model: DiskModel, rho):
    if np.any(np.asarray(rho) > model.radius * (1.0 + _DISK_TOL) + _DISK_TOL):
        raise OutOfDisk(f"point outside the closed disk of radius {model.radius}")


def phi_map(model: DiskModel, z):
    """Angle-preserving diffeomorphism of the disk onto the unit disk."""
    z = np.asarray(z, dtype=complex)
    _check_in_disk(model, np.abs(z))
    return (1.0 - model.lam) / (1.0 - model.kappa * np.abs(z) ** 2) * z / model.radius


def phi_inverse(model: DiskModel, z_unit):
    """Inverse of :func:`phi_map`."""
    z = np.asarray(z_unit, dtype=complex)
    r = np.abs(z)
    safe = np.where(r > 0.0, r, 1.0)
    return z * (phi_inverse_radial(model, r) / safe)


def psi_map(model: DiskModel, rho, theta):
    """Phase-space change of variables (rho, theta) -> (rho', theta').

    rho' is the unit-disk radius of :func:`phi_map`; theta' subtracts the
    two-argument arctangent of (q*sin 2theta, 1 + q*cos 2theta) with
    q = kappa*rho^2, which keeps theta' continuous in theta (q < 1 on a
    simple disk, so the second argument never reaches -1 and 0 together).
    """
    rho = np.asarray(rho, dtype=float)
    _check_in_disk(model, rho)
    theta = np.asarray(theta, dtype=float)
    q = model.kappa * rho**2
    tp = theta - np.arctan2(q * np.sin(2.0 * theta), 1.0 + q * np.cos(2.0 * theta))
    return phi_radial(model, rho), tp


def psi_theta_jacobian(model: DiskModel, rho, theta):
    """d(theta')/d(theta) of :func:`psi_map`, in closed form."""
    q = model.kappa * np.asarray(rho, dtype=float) ** 2
    return (1.0 - q * q) / (1.0 + 2.0 * q * np.cos(2.0 * np.asarray(theta)) + q * q)


# ---------------------------------------------------------------------------
# Footpoints and scattering
# ---------------------------------------------------------------------------


def footpoint(model: DiskModel, rho, omega, theta):
    """Fan-beam coordinates of the geodesic through (rho*exp(i*omega), theta).

    Returns (beta, alpha) arrays broadcast over the inputs, with beta in
    [0, 2*pi) and alpha in (-pi/2, pi/2).  Rotation equivariance reduces the
    computation to omega = 0: map through :func:`psi_map`, read off the
    straight-line footpoint on the unit disk, then pull the entry angle back
    through :func:`s_inverse`.
    """
    rho = np.asarray(rho, dtype=float)
    _check_in_disk(model, rho)
    omega = np.asarray(omega, dtype=float)
    theta = np.asarray(theta, dtype=float)
    rp, tp = psi_map(model, rho, theta - omega)
    a_ref = np.arcsin(np.clip(-rp * np.sin(tp), -1.0, 1.0))
    beta = wrap_angle(tp - np.pi - a_ref + omega)
    alpha = s_inverse(model, a_ref)
    return beta, alpha


def footpoint_phase(model: DiskModel, point: PhasePoint) -> FanBeamCoord:
    """Scalar convenience wrapper around :func:`footpoint`."""
    beta, alpha = footpoint(model, point.rho, point.omega, point.theta)
    return FanBeamCoord(float(beta), float(alpha))


def scattering(model: DiskModel, beta, alpha):
    """Exit data (on the outward boundary bundle) of the geodesic (beta, alpha)."""
    return wrap_angle(beta + np.pi + 2.0 * s_map(model, alpha)), np.pi - np.asarray(alpha)


def antipodal_scattering(model: DiskModel, beta, alpha):
    """Scattering composed with the fiberwise antipodal map; an involution."""
    return wrap_angle(beta + np.pi + 2.0 * s_map(model, alpha)), -np.asarray(alpha)


# ---------------------------------------------------------------------------
# Geodesic arcs
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _gauss_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def mobius_exit_parameter(model: DiskModel, alpha):
    """Positive root x of |T(x)| = R for the entry Moebius parameterization.

    |T(x)|^2 = R^2 is a quadratic with roots 0 and 2*R*cos(alpha)/(1-lam).
    """
    return 2.0 * model.radius * np.cos(alpha) / (1.0 - model.lam)


def arc_time(model: DiskModel, x):
    """Unit-speed time along a geodesic as a function of the Moebius parameter.

    The arclength element |T'(x)|/(1 + kappa*|T(x)|^2) dx collapses
    algebraically to dx/(1 + kappa*x^2), so time integrates in closed form.
    """
    x = np.asarray(x, dtype=float)
    k = model.kappa
    if k > 0.0:
        rk = np.sqrt(k)
        return np.arctan(rk * x) / rk
    if k < 0.0:
        rk = np.sqrt(-k)
        return np.arctanh(rk * x) / rk
    return x


def exit_time(model: DiskModel, alpha):
    """Exit time tau of the geodesic entering with angle alpha (vectorized)."""
    return arc_time(model, mobius_exit_parameter(model, alpha))


@dataclass(frozen=True)
class GeodesicArc:
    """One maximal geodesic, parameterized by its entry Moebius coordinate.

    ``point(x)`` traces the arc for x in [0, x_exit]; ``sample(n)`` returns
    Gauss-Legendre points and arclength weights that integrate smooth
    functions along the arc to near machine precision.
    """

    model: DiskModel
    beta: float
    alpha: float
    x_exit: float
    tau: float

    def point(self, x):
        m = self.model
        e = np.exp(1j * self.alpha)
        x = np.asarray(x, dtype=float)
        return np.exp(1j * self.beta) * (m.radius - x * e) / (1.0 + m.radius * m.kappa * e * x)

    def velocity(self, x):
        """d(point)/dx; its argument is the travel direction (conformal metric)."""
        m = self.model
        e = np.exp(1j * self.alpha)
        x = np.asarray(x, dtype=float)
        return -np.exp(1j * self.beta) * e * (1.0 + m.lam) / (1.0 + m.radius * m.kappa * e * x) ** 2

    def direction(self, x):
        return np.angle(self.velocity(x))

    def sample(self, n: int):
        """Gauss-Legendre quadrature of the arclength measure: (points, weights)."""
        u, wu = _gauss_nodes(int(n))
        x = 0.5 * self.x_exit * (u + 1.0)
        w = 0.5 * self.x_exit * wu / (1.0 + self.model.kappa * x * x)
        return self.point(x), w


def geodesic(model: DiskModel, coord_or_beta, alpha=None) -> GeodesicArc:
    """Construct the maximal geodesic with entry data (beta, alpha).

    Raises TangentRay when |alpha| >= pi/2 (or numerically indistinguishable
    from it), where the exit parameter degenerates to 0.
    """
    if alpha is None:
        beta, alpha = coord_or_beta.beta, coord_or_beta.alpha
    else:
        beta = coord_or_beta
    beta = float(beta)
    alpha = float(alpha)
    x_exit = mobius_exit_parameter(model, alpha)
    if abs(alpha) >= np.pi / 2 or x_exit < _TANGENT_TOL:
        raise TangentRay(f"|alpha| = {abs(alpha)} does not give a transversal ray")
    return GeodesicArc(
        model=model,
        beta=beta,
        alpha=alpha,
        x_exit=float(x_exit),
        tau=float(arc_time(model, x_exit)),
    )
