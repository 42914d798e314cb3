"""Grids, spectral containers, and analysis/synthesis between them.

Disk functions live either as samples on a tensor polar grid (Gauss radial
nodes pulled back through the disk diffeomorphism, equispaced angles) or as
coefficients in the orthonormal basis; boundary functions likewise on a
(beta, alpha) grid or as mode coefficients.  The grids are chosen so that
analysis reduces to exact quadrature for band-limited data: Gauss in the
squared unit radius, trapezoid (FFT) in the periodic directions, Gauss in
the flattened fiber angle.

All containers are frozen; coefficients use the triangular layout from
:mod:`gxr.basis` on the disk and a rectangular (n, k)-window on the
boundary, k running over a configurable integer window that may extend
beyond [0, n] to capture cokernel components.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import tri_index, tri_pairs, tri_size
from .errors import ModelMismatch, ResolutionTooLow
from .geometry import (
    DiskModel,
    conformal_weight,
    phi_inverse_radial,
    phi_map,
    s_inverse,
    s_map,
    s_prime,
)

TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralField:
    """Disk function as coefficients in the normalized basis, degree <= N."""

    model: DiskModel
    degree: int
    coeffs: np.ndarray  # complex, flat triangular layout

    def __post_init__(self):
        if self.coeffs.shape != (tri_size(self.degree),):
            raise ValueError("coefficient array does not match the degree")

    def coefficient(self, n: int, k: int) -> complex:
        return complex(self.coeffs[tri_index(n, k)])

    def norm(self) -> float:
        """L2 norm in the weighted volume, by Parseval."""
        return float(np.linalg.norm(self.coeffs))

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralField":
        return SpectralField(self.model, self.degree, np.asarray(coeffs, dtype=complex))


@dataclass(frozen=True)
class SpectralBoundary:
    """Boundary function as mode coefficients on a rectangular (n, k) window."""

    model: DiskModel
    degree: int
    k_lo: int
    k_hi: int
    coeffs: np.ndarray  # complex, shape (degree+1, k_hi-k_lo+1)

    def __post_init__(self):
        if self.k_lo > 0 or self.k_hi < self.degree:
            raise ValueError("k window must contain [0, degree]")
        if self.coeffs.shape != (self.degree + 1, self.k_hi - self.k_lo + 1):
            raise ValueError("coefficient array does not match degree/window")

    def coefficient(self, n: int, k: int) -> complex:
        if not (0 <= n <= self.degree and self.k_lo <= k <= self.k_hi):
            raise IndexError(f"(n={n}, k={k}) outside the stored window")
        return complex(self.coeffs[n, k - self.k_lo])

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def with_coeffs(self, coeffs: np.ndarray) -> "SpectralBoundary":
        return SpectralBoundary(self.model, self.degree, self.k_lo, self.k_hi,
                                np.asarray(coeffs, dtype=complex))

    def range_mask(self) -> np.ndarray:
        """Boolean mask of the in-range band 0 <= k <= n."""
        n = np.arange(self.degree + 1)[:, None]
        k = np.arange(self.k_lo, self.k_hi + 1)[None, :]
        return (k >= 0) & (k <= n)

    def kernel_energy_fraction(self) -> float:
        """Share of squared norm carried by modes with k outside [0, n]."""
        total = np.sum(np.abs(self.coeffs) ** 2)
        if total == 0.0:
            return 0.0
        out = np.sum(np.abs(self.coeffs[~self.range_mask()]) ** 2)
        return float(out / total)


@dataclass(frozen=True)
class GridField:
    """Samples of a disk function on the canonical polar grid."""

    model: DiskModel
    rho: np.ndarray
    omega: np.ndarray
    values: np.ndarray  # complex, shape (len(rho), len(omega))


@dataclass(frozen=True)
class GridSinogram:
    """Samples of a boundary function on the canonical (beta, alpha) grid."""

    model: DiskModel
    beta: np.ndarray
    alpha: np.ndarray
    values: np.ndarray  # complex, shape (len(beta), len(alpha))


# ---------------------------------------------------------------------------
# canonical grids
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def radial_nodes(model: DiskModel, n_rho: int):
    """Radial grid and unit-disk quadrature data.

    Returns (rho, rho_unit, w_unit): Gauss nodes in the squared unit radius
    mapped to radii rho_unit = sqrt(t) of the unit disk and pulled back to
    the model disk; w_unit integrates smooth f against dt on (0, 1).
    """
    x, w = _leggauss(n_rho)
    t = 0.5 * (x + 1.0)
    w_unit = 0.5 * w
    rho_unit = np.sqrt(t)
    return phi_inverse_radial(model, rho_unit), rho_unit, w_unit


def omega_nodes(n_omega: int):
    return TWO_PI * np.arange(n_omega) / n_omega


def alpha_nodes(model: DiskModel, n_alpha: int):
    """Fiber grid and quadrature data for the boundary.

    Gauss nodes a on (-pi/2, pi/2) for the flattened angle, pulled back
    through the angle reparameterization; w_unit integrates against da.
    """
    x, w = _leggauss(n_alpha)
    a = 0.5 * np.pi * x
    w_unit = 0.5 * np.pi * w
    return s_inverse(model, a), a, w_unit


def beta_nodes(n_beta: int):
    return TWO_PI * np.arange(n_beta) / n_beta


def sample_disk(model: DiskModel, fn, n_rho: int, n_omega: int) -> GridField:
    """Evaluate a callable f(z) on the canonical polar grid."""
    rho, _, _ = radial_nodes(model, n_rho)
    omega = omega_nodes(n_omega)
    z = rho[:, None] * np.exp(1j * omega[None, :])
    return GridField(model, rho, omega, np.asarray(fn(z), dtype=complex))


def sample_boundary(model: DiskModel, fn, n_beta: int, n_alpha: int) -> GridSinogram:
    """Evaluate a callable g(beta, alpha) on the canonical boundary grid."""
    beta = beta_nodes(n_beta)
    alpha, _, _ = alpha_nodes(model, n_alpha)
    b = np.broadcast_to(beta[:, None], (n_beta, n_alpha))
    a = np.broadcast_to(alpha[None, :], (n_beta, n_alpha))
    return GridSinogram(model, beta, alpha, np.asarray(fn(b, a), dtype=complex))


# ---------------------------------------------------------------------------
# disk analysis / synthesis
# ---------------------------------------------------------------------------


def _disk_radial_tables(degree: int, rho_unit: np.ndarray):
    """Per azimuthal order b = |m|: rows kt -> rho^b P_kt^(0,b)(2 rho^2 - 1)."""
    from .basis import jacobi_table

    x = 2.0 * rho_unit**2 - 1.0
    tables = []
    for b in range(degree + 1):
        ktmax = (degree - b) // 2
        tables.append(jacobi_table(ktmax, b, x) * rho_unit**b)
    return tables


def _require(cond: bool, msg: str):
    if not cond:
        raise ResolutionTooLow(msg)


def analyze_disk(field, degree: int, *, model: DiskModel | None = None,
                 n_rho: int | None = None, n_omega: int | None = None) -> SpectralField:
    """Project a disk function onto the normalized basis up to ``degree``.

    ``field`` is a :class:`GridField` on the canonical grid or a callable
    f(z); callables are sampled at the default resolution for the degree.
    Quadrature is exact for band-limited inputs: Gauss in the squared unit
    radius, FFT in the angle.
    """
    if callable(field):
        if model is None:
            raise ValueError("model is required when analyzing a callable")
        n_rho = n_rho if n_rho is not None else degree + 2
        n_omega = n_omega if n_omega is not None else 2 * degree + 2
        field = sample_disk(model, field, n_rho, n_omega)
    model = field.model
    nr, no = field.values.shape
    _require(no >= 2 * degree + 2, f"need n_omega >= {2*degree+2} for degree {degree}")
    _require(2 * nr - 1 >= degree, f"need n_rho >= {(degree+1)//2} for degree {degree}")

    rho, rho_unit, w_unit = radial_nodes(model, nr)
    if not np.allclose(rho, field.rho, rtol=1e-12, atol=1e-12):
        raise ResolutionTooLow("grid is not the canonical analysis grid for this model")

    g = field.values / conformal_weight(model, rho)[:, None]
    G = np.fft.fft(g, axis=1) * (TWO_PI / no)
    tables = _disk_radial_tables(degree, rho_unit)
    scale = model.radius / (1.0 - model.lam)

    coeffs = np.zeros(tri_size(degree), dtype=complex)
    for m in range(-degree, degree + 1):
        b = abs(m)
        proj = tables[b] @ (w_unit * G[:, m % no])  # (ktmax+1,)
        for kt in range(proj.shape[0]):
            n = b + 2 * kt
            k = kt if m >= 0 else n - kt
            sign = -1.0 if k % 2 else 1.0
            coeffs[tri_index(n, k)] = sign * np.sqrt((n + 1) / np.pi) * proj[kt] * scale
    return SpectralField(model, degree, coeffs)


def _disk_mode_sum(spec: SpectralField, rho_unit: np.ndarray):
    """Accumulate per-m radial sums; returns dict m -> array over rho_unit."""
    degree = spec.degree
    tables = _disk_radial_tables(degree, rho_unit)
    per_m = {}
    for m in range(-degree, degree + 1):
        b = abs(m)
        tab = tables[b]
        acc = np.zeros(rho_unit.shape, dtype=complex)
        any_nonzero = False
        for kt in range(tab.shape[0]):
            n = b + 2 * kt
            k = kt if m >= 0 else n - kt
            c = spec.coeffs[tri_index(n, k)]
            if c != 0.0:
                sign = -1.0 if k % 2 else 1.0
                acc += c * sign * np.sqrt((n + 1) / np.pi) * tab[kt]
                any_nonzero = True
        if any_nonzero:
            per_m[m] = acc
    return per_m


def synthesize_disk(spec: SpectralField, n_rho: int, n_omega: int, *,
                    weighted: bool = False) -> GridField:
    """Evaluate a spectral field on the canonical grid.

    With ``weighted=True`` the extra conformal weight is applied, producing
    the function w * f used by the reconstruction frame.
    """
    model = spec.model
    if n_omega < 2 * spec.degree + 2:
        raise ResolutionTooLow(f"need n_omega >= {2*spec.degree+2} to synthesize degree {spec.degree}")
    rho, rho_unit, _ = radial_nodes(model, n_rho)
    per_m = _disk_mode_sum(spec, rho_unit)
    S = np.zeros((n_rho, n_omega), dtype=complex)
    for m, acc in per_m.items():
        S[:, m % n_omega] += acc
    vals = np.fft.ifft(S, axis=1) * n_omega
    w = conformal_weight(model, rho)[:, None]
    vals = vals * ((1.0 - model.lam) / model.radius) * w
    if weighted:
        vals = vals * w
    return GridField(model, rho, omega_nodes(n_omega), vals)


def field_callable(spec: SpectralField, *, weighted: bool = False):
    """Pointwise evaluator z -> f(z) of a spectral field (vectorized)."""
    model = spec.model

    def fn(z):
        z = np.asarray(z, dtype=complex)
        zp = phi_map(model, z)
        ru = np.abs(zp)
        om = np.angle(zp)
        per_m = _disk_mode_sum(spec, ru)
        out = np.zeros(z.shape, dtype=complex)
        for m, acc in per_m.items():
            out += acc * np.exp(1j * m * om)
        wgt = conformal_weight(model, np.abs(z))
        out *= (1.0 - model.lam) / model.radius * wgt
        if weighted:
            out *= wgt
        return out

    return fn


# ---------------------------------------------------------------------------
# boundary analysis / synthesis
# ---------------------------------------------------------------------------


def _window_modes(degree: int, k_lo: int, k_hi: int):
    """(n, k, m) triples of the rectangular window, in row-major order."""
    n = np.repeat(np.arange(degree + 1), k_hi - k_lo + 1)
    k = np.tile(np.arange(k_lo, k_hi + 1), degree + 1)
    return n, k, n - 2 * k


def _boundary_angular_matrix(degree: int, k_lo: int, k_hi: int, a: np.ndarray):
    """Fiber profiles of the normalized flat modes, one row per (n, k).

    Row (n,k) holds ((-1)^n / 2 pi)(e^{i(m+n+1)a} + (-1)^n e^{i(m-n-1)a}),
    the normalized flat mode with its e^{i m beta} factor stripped.
    """
    n, k, m = _window_modes(degree, k_lo, k_hi)
    sgn = np.where(n % 2 == 0, 1.0, -1.0)[:, None]
    up = np.exp(1j * np.outer(m + n + 1, a))
    dn = np.exp(1j * np.outer(m - n - 1, a))
    return sgn / (2.0 * np.pi) * (up + sgn * dn)


def analyze_boundary(sino, degree: int, *, k_lo: int = 0, k_hi: int | None = None,
                     model: DiskModel | None = None,
                     n_beta: int | None = None, n_alpha: int | None = None) -> SpectralBoundary:
    """Project a boundary function onto the normalized modes.

    ``sino`` is a :class:`GridSinogram` on the canonical grid or a callable
    g(beta, alpha).  The k window defaults to [0, degree] and may be widened
    to capture cokernel components.
    """
    if k_hi is None:
        k_hi = degree
    if callable(sino):
        if model is None:
            raise ValueError("model is required when analyzing a callable")
        mmax = max(degree - 2 * k_lo, 2 * k_hi, degree)
        n_beta = n_beta if n_beta is not None else 2 * mmax + 4
        n_alpha = n_alpha if n_alpha is not None else max(64, int(2.5 * (mmax + degree + 1)) + 16)
        sino = sample_boundary(model, sino, n_beta, n_alpha)
    model = sino.model
    nb, na = sino.values.shape
    mmax = max(degree - 2 * k_lo, 2 * k_hi, degree)
    _require(nb >= 2 * mmax + 2, f"need n_beta >= {2*mmax+2} for this window")
    _require(na >= 2 * degree + 2, f"need n_alpha >= {2*degree+2} for degree {degree}")

    alpha, a, w_unit = alpha_nodes(model, na)
    if not np.allclose(alpha, sino.alpha, rtol=1e-12, atol=1e-12):
        raise ResolutionTooLow("grid is not the canonical boundary grid for this model")

    v = sino.values / np.sqrt(s_prime(model, alpha))[None, :]
    V = np.fft.fft(v, axis=0) * (TWO_PI / nb)  # beta transform, rows indexed by m mod nb
    A = _boundary_angular_matrix(degree, k_lo, k_hi, a)
    _, _, m = _window_modes(degree, k_lo, k_hi)
    Vm = V[m % nb, :]  # (modes, na)
    coeffs = np.sqrt(model.measure_factor) * np.einsum("ij,ij->i", np.conj(A) * w_unit[None, :], Vm)
    return SpectralBoundary(model, degree, k_lo, k_hi,
                            coeffs.reshape(degree + 1, k_hi - k_lo + 1))


def synthesize_boundary(spec: SpectralBoundary, n_beta: int, n_alpha: int) -> GridSinogram:
    """Evaluate a spectral boundary function on the canonical grid."""
    model = spec.model
    mmax = max(spec.degree - 2 * spec.k_lo, 2 * spec.k_hi, spec.degree)
    if n_beta < 2 * mmax + 2:
        raise ResolutionTooLow(f"need n_beta >= {2*mmax+2} to synthesize this window")
    alpha, a, _ = alpha_nodes(model, n_alpha)
    A = _boundary_angular_matrix(spec.degree, spec.k_lo, spec.k_hi, a)
    _, _, m = _window_modes(spec.degree, spec.k_lo, spec.k_hi)
    flat = spec.coeffs.reshape(-1)
    S = np.zeros((n_beta, n_alpha), dtype=complex)
    np.add.at(S, m % n_beta, flat[:, None] * A)
    v = np.fft.ifft(S, axis=0) * n_beta
    u = v * (np.sqrt(s_prime(model, alpha)) / np.sqrt(model.measure_factor))[None, :]
    return GridSinogram(model, beta_nodes(n_beta), alpha, u)


def boundary_callable(spec: SpectralBoundary):
    """Pointwise evaluator (beta, alpha) -> g(beta, alpha), vectorized."""
    model = spec.model
    _, _, m = _window_modes(spec.degree, spec.k_lo, spec.k_hi)
    flat = spec.coeffs.reshape(-1)
    keep = flat != 0.0
    flat = flat[keep]
    mk = m[keep]
    nsel = _window_modes(spec.degree, spec.k_lo, spec.k_hi)[0][keep]

    def fn(beta, alpha):
        beta = np.asarray(beta, dtype=float)
        alpha = np.asarray(alpha, dtype=float)
        shape = np.broadcast_shapes(beta.shape, alpha.shape)
        b = np.broadcast_to(beta, shape).ravel()
        al = np.broadcast_to(alpha, shape).ravel()
        a = np.asarray(s_map(model, al))
        sgn = np.where(nsel % 2 == 0, 1.0, -1.0)[:, None]
        up = np.exp(1j * (np.outer(mk + nsel + 1, a)))
        dn = np.exp(1j * (np.outer(mk - nsel - 1, a)))
        prof = sgn / (2.0 * np.pi) * (up + sgn * dn)
        phase = np.exp(1j * np.outer(mk, b))
        vals = (flat[:, None] * prof * phase).sum(axis=0)
        vals *= np.sqrt(s_prime(model, al)) / np.sqrt(model.measure_factor)
        return vals.reshape(shape)

    return fn


# ---------------------------------------------------------------------------
# spectral derivative / shift operators (wrappers over the index recurrences)
# ---------------------------------------------------------------------------


def dz_spectral(spec: SpectralField) -> SpectralField:
    """Holomorphic derivative of a spectral field (degree drops by one)."""
    from .basis import dz_triangle

    return SpectralField(spec.model, max(spec.degree - 1, 0),
                         dz_triangle(spec.coeffs, spec.degree))


def dzbar_spectral(spec: SpectralField) -> SpectralField:
    """Antiholomorphic derivative of a spectral field (degree drops by one)."""
    from .basis import dzbar_triangle

    return SpectralField(spec.model, max(spec.degree - 1, 0),
                         dzbar_triangle(spec.coeffs, spec.degree))


def beurling(spec: SpectralField) -> SpectralField:
    """The k-shift realizing the Beurling transform on the basis chain."""
    from .basis import beurling_triangle

    return spec.with_coeffs(beurling_triangle(spec.coeffs, spec.degree))


# ---------------------------------------------------------------------------
# CSV export of coefficient tables
# ---------------------------------------------------------------------------


def coefficients_to_csv(spec, path) -> None:
    """Write a coefficient table with header columns n,k,re,im."""
    rows = ["n,k,re,im"]
    if isinstance(spec, SpectralField):
        for n, k, i in tri_pairs(spec.degree):
            c = spec.coeffs[i]
            rows.append(f"{n},{k},{c.real!r},{c.imag!r}")
    elif isinstance(spec, SpectralBoundary):
        for n in range(spec.degree + 1):
            for k in range(spec.k_lo, spec.k_hi + 1):
                c = spec.coefficient(n, k)
                rows.append(f"{n},{k},{c.real!r},{c.imag!r}")
    else:
        raise TypeError("expected SpectralField or SpectralBoundary")
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")


def require_same_model(a: DiskModel, b: DiskModel) -> None:
    if not (a.kappa == b.kappa and a.radius == b.radius):
        raise ModelMismatch(f"{a} vs {b}")
