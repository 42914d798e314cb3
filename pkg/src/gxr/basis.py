"""Orthogonal bases diagonalizing the transform, and their index calculus.

Disk side: complex Zernike-type polynomials ``Z[n, k]`` for ``0 <= k <= n``,
orthogonal on the unit disk with ``||Z[n,k]||^2 = pi/(n+1)``, evaluated
through their Jacobi-polynomial radial profile.  On a curved model they are
transplanted by the disk diffeomorphism and multiplied by the conformal
weight, which preserves the eigenfunction property of the degenerate
elliptic operator.

Boundary side: modes ``psi[n, k]`` on the inward-pointing bundle, defined
for every integer ``k``; the band ``0 <= k <= n`` spans the range of the
ray transform and the complement spans its cokernel.

Index conventions: a field of degree ``N`` is stored as a flat array over
the triangle ``0 <= k <= n <= N`` with offset ``n*(n+1)//2 + k``.
"""

from __future__ import annotations

import numpy as np

from .geometry import DiskModel, conformal_weight, phi_map, s_map, s_prime

# ---------------------------------------------------------------------------
# triangular index layout
# ---------------------------------------------------------------------------


def tri_size(degree: int) -> int:
    """Number of (n, k) pairs with 0 <= k <= n <= degree."""
    return (degree + 1) * (degree + 2) // 2


def tri_index(n: int, k: int) -> int:
    """Flat offset of the pair (n, k) in the triangular layout."""
    return n * (n + 1) // 2 + k


def tri_pairs(degree: int):
    """Iterate (n, k, flat_index) over the triangle in storage order."""
    i = 0
    for n in range(degree + 1):
        for k in range(n + 1):
            yield n, k, i
            i += 1


def _check_indices(n: int, k: int) -> None:
    if n < 0:
        raise IndexError(f"degree index must be >= 0, got n={n}")
    if not 0 <= k <= n:
        raise IndexError(f"order index k={k} outside [0, n={n}]")


# ---------------------------------------------------------------------------
# Jacobi polynomials P_j^(0, b) by forward three-term recurrence
# ---------------------------------------------------------------------------
# Forward recurrence in the degree is well conditioned on [-1, 1] for the
# moderate degrees used here (documented limit: a few hundred).


def jacobi_table(jmax: int, b: int, x):
    """All P_j^(0,b)(x) for j = 0..jmax, stacked along the first axis."""
    x = np.asarray(x, dtype=float)
    out = np.empty((jmax + 1,) + x.shape, dtype=float)
    out[0] = 1.0
    if jmax == 0:
        return out
    out[1] = 1.0 + (b + 2) * (x - 1.0) / 2.0
    for j in range(2, jmax + 1):
        c1 = 2.0 * j * (j + b) * (2 * j + b - 2)
        c2a = (2 * j + b - 1.0) * (2 * j + b) * (2 * j + b - 2)
        c2b = -(2 * j + b - 1.0) * b * b
        c3 = 2.0 * (j - 1) * (j + b - 1) * (2 * j + b)
        out[j] = ((c2a * x + c2b) * out[j - 1] - c3 * out[j - 2]) / c1
    return out


def jacobi_poly(j: int, b: int, x):
    """P_j^(0,b)(x); thin wrapper over :func:`jacobi_table`."""
    return jacobi_table(j, b, x)[j]


# ---------------------------------------------------------------------------
# disk basis
# ---------------------------------------------------------------------------


def zernike_radial(n: int, k: int, rho):
    """Radial profile of Z[n,k]: (-1)^k rho^|m| P_kt^(0,|m|)(2 rho^2 - 1)
    with m = n - 2k and kt = min(k, n-k)."""
    _check_indices(n, k)
    rho = np.asarray(rho, dtype=float)
    m = abs(n - 2 * k)
    kt = min(k, n - k)
    sign = -1.0 if k % 2 else 1.0
    return sign * rho**m * jacobi_poly(kt, m, 2.0 * rho**2 - 1.0)


def zernike_eval(n: int, k: int, z):
    """Z[n,k] at points of the closed unit disk.

    The supremum over the disk is 1, attained on the boundary.
    """
    z = np.asarray(z, dtype=complex)
    rho = np.abs(z)
    omega = np.angle(z)
    return zernike_radial(n, k, rho) * np.exp(1j * (n - 2 * k) * omega)


def zernike_norm(n: int, k: int) -> float:
    """L2 norm over the unit disk: sqrt(pi/(n+1)), the same for every k."""
    _check_indices(n, k)
    return float(np.sqrt(np.pi / (n + 1)))


def zernike_eval_normalized(n: int, k: int, z):
    return zernike_eval(n, k, z) / zernike_norm(n, k)


def curved_zernike_eval(model: DiskModel, n: int, k: int, z):
    """Transplanted basis element w(z) * Z[n,k](Phi(z)) on the model disk."""
    z = np.asarray(z, dtype=complex)
    return conformal_weight(model, np.abs(z)) * zernike_eval(n, k, phi_map(model, z))


def curved_zernike_norm(model: DiskModel, n: int, k: int) -> float:
    """Norm in L2(w dVol): (R/(1 - lam)) * sqrt(pi/(n+1))."""
    return model.radius / (1.0 - model.lam) * zernike_norm(n, k)


def curved_zernike_eval_normalized(model: DiskModel, n: int, k: int, z):
    return curved_zernike_eval(model, n, k, z) / curved_zernike_norm(model, n, k)


# ---------------------------------------------------------------------------
# boundary basis
# ---------------------------------------------------------------------------


def psi_flat_eval(n: int, k: int, beta, alpha):
    """Flat-disk boundary mode; defined for every integer k.

    ((-1)^n / 4 pi) e^{i (n-2k)(beta+alpha)} (e^{i(n+1)alpha} + (-1)^n e^{-i(n+1)alpha})
    """
    if n < 0:
        raise IndexError(f"degree index must be >= 0, got n={n}")
    beta = np.asarray(beta, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    m = n - 2 * k
    sgn = -1.0 if n % 2 else 1.0
    phase = np.exp(1j * m * (beta + alpha))
    fiber = np.exp(1j * (n + 1) * alpha) + sgn * np.exp(-1j * (n + 1) * alpha)
    return sgn / (4.0 * np.pi) * phase * fiber


def psi_eval(model: DiskModel, n: int, k: int, beta, alpha):
    """Boundary mode of the curved model: sqrt(s') times the flat mode at
    the reparameterized fiber angle."""
    a = s_map(model, alpha)
    return np.sqrt(s_prime(model, alpha)) * psi_flat_eval(n, k, beta, a)


def psi_norm(model: DiskModel) -> float:
    """L2(boundary area form) norm of any psi[n,k]: sqrt(measure_factor)/2."""
    return float(np.sqrt(model.measure_factor) / 2.0)


def psi_eval_normalized(model: DiskModel, n: int, k: int, beta, alpha):
    return psi_eval(model, n, k, beta, alpha) / psi_norm(model)


# ---------------------------------------------------------------------------
# index recurrences
# ---------------------------------------------------------------------------


def pnk_bound(n: int, k: int) -> int:
    """Length bound of the derivative expansion of Z[n,k].

    Equals k when k < n-k and n-k-1 otherwise (0 for n = 0).
    """
    _check_indices(n, k)
    if n == 0:
        return 0
    return k if k < n - k else n - k - 1


def dz_triangle(coeffs: np.ndarray, degree: int) -> np.ndarray:
    """Holomorphic derivative on normalized triangular coefficients.

    out[n,k] = sqrt(n+1) * sum_p (-1)^p sqrt(n+2+2p) * in[n+1+2p, k+p],
    truncated at the input degree; exact on band-limited inputs.  The output
    triangle has degree max(degree-1, 0).
    """
    out_deg = max(degree - 1, 0)
    out = np.zeros(tri_size(out_deg), dtype=complex)
    for n in range(out_deg + 1):
        for k in range(n + 1):
            acc = 0.0 + 0.0j
            p = 0
            while n + 1 + 2 * p <= degree:
                acc += (-1.0) ** p * np.sqrt(n + 2 + 2 * p) * coeffs[tri_index(n + 1 + 2 * p, k + p)]
                p += 1
            out[tri_index(n, k)] = np.sqrt(n + 1.0) * acc
    return out


def dzbar_triangle(coeffs: np.ndarray, degree: int) -> np.ndarray:
    """Antiholomorphic derivative; the source index shifts to (n+1+2p, k+1+p)
    and the sign alternation starts at -1."""
    out_deg = max(degree - 1, 0)
    out = np.zeros(tri_size(out_deg), dtype=complex)
    for n in range(out_deg + 1):
        for k in range(n + 1):
            acc = 0.0 + 0.0j
            p = 0
            while n + 1 + 2 * p <= degree:
                acc += (-1.0) ** (p + 1) * np.sqrt(n + 2 + 2 * p) * coeffs[tri_index(n + 1 + 2 * p, k + 1 + p)]
                p += 1
            out[tri_index(n, k)] = np.sqrt(n + 1.0) * acc
    return out


def beurling_triangle(coeffs: np.ndarray, degree: int) -> np.ndarray:
    """Index shift (n, k) -> (n, k+1) realizing the Beurling transform on the
    basis chain; mass at k = n has no admissible target and is dropped (a
    deliberate truncation of the operator, exact on the chain itself)."""
    out = np.zeros_like(coeffs)
    for n in range(degree + 1):
        for k in range(n):
            out[tri_index(n, k + 1)] = coeffs[tri_index(n, k)]
    return out
