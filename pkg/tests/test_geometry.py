import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from gxr.errors import NonpositiveRadius, OutOfDisk, SimplicityViolation, TangentRay
from gxr.geometry import (
    angle_gap,
    antipodal_scattering,
    arc_time,
    conformal_weight,
    exit_time,
    footpoint,
    footpoint_phase,
    geodesic,
    make_model,
    mobius_exit_parameter,
    phi_inverse,
    phi_inverse_radial,
    phi_map,
    phi_radial,
    psi_map,
    psi_theta_jacobian,
    s_inverse,
    s_map,
    s_prime,
    scattering,
    wrap_angle,
    PhasePoint,
)


# --------------------------------------------------------------------------
# oracles
# --------------------------------------------------------------------------


def footpoint_oracle(model, rho, omega, theta):
    """Entry data of the geodesic through (rho e^{i omega}, theta), computed
    from scratch: parameterize the arc through the interior point as its own
    Moebius curve, solve the boundary-crossing quadratic for the backward
    root, and read the entry angle off the entry velocity."""
    k, R = model.kappa, model.radius
    th = theta - omega
    e = np.exp(1j * th)
    A = 1.0 - (k * rho * R) ** 2
    B = 2.0 * rho * np.cos(th) * (1.0 + k * R**2)
    C = rho**2 - R**2
    x_entry = (-B - np.sqrt(B * B - 4.0 * A * C)) / (2.0 * A)
    T = (e * x_entry + rho) / (1.0 - k * e * rho * x_entry)
    z_entry = T * np.exp(1j * omega)
    beta = wrap_angle(np.angle(z_entry))
    v = e * (1.0 + k * rho**2) / (1.0 - k * e * rho * x_entry) ** 2 * np.exp(1j * omega)
    alpha = angle_gap(np.angle(v), beta + np.pi)
    return beta, alpha, np.abs(z_entry)


def arclength_quad(model, beta, alpha):
    """Exit time by adaptive quadrature of |T'(x)| / (1 + kappa |T|^2)."""
    arc = geodesic(model, beta, alpha)

    def ds(x):
        m = model
        e = np.exp(1j * alpha)
        T = (m.radius - x * e) / (1.0 + m.radius * m.kappa * e * x)
        dT = -e * (1.0 + m.lam) / (1.0 + m.radius * m.kappa * e * x) ** 2
        return abs(dT) / (1.0 + m.kappa * abs(T) ** 2)

    val, err = quad(ds, 0.0, arc.x_exit, limit=400, epsabs=1e-13, epsrel=1e-13)
    assert err < 1e-8
    return val


# --------------------------------------------------------------------------
# model construction
# --------------------------------------------------------------------------


def test_reference_model_constants(flat):
    assert flat.lam == 0.0
    assert_allclose(flat.c_const, 4.0 * np.pi, rtol=0, atol=0)
    assert_allclose(flat.measure_factor, 1.0, rtol=0, atol=0)


def test_derived_constants_formula():
    m = make_model(0.5, 1.0)
    assert_allclose(m.lam, 0.5)
    assert_allclose(m.c_const, 4.0 * np.pi * 1.0 / (1.0 - 0.5))  # = 8 pi
    assert_allclose(m.c_const, 8.0 * np.pi)
    m2 = make_model(0.3, 1.5)
    assert_allclose(m2.lam, 0.675)
    assert_allclose(m2.c_const, 4.0 * np.pi * 1.5 / (1.0 - 0.675))
    assert_allclose(m2.measure_factor, 1.5 / (1.0 + 0.675))


def test_model_positivity(model):
    assert model.c_const > 0
    assert model.measure_factor > 0


@pytest.mark.parametrize("kappa,radius", [(1.0, 1.0), (-1.0, 1.0), (0.5, 2.0)])
def test_simplicity_rejected(kappa, radius):
    with pytest.raises(SimplicityViolation):
        make_model(kappa, radius)


def test_nonpositive_radius_rejected():
    with pytest.raises(NonpositiveRadius):
        make_model(0.0, 0.0)
    with pytest.raises(NonpositiveRadius):
        make_model(0.0, -2.0)


# --------------------------------------------------------------------------
# s map
# --------------------------------------------------------------------------


def test_s_map_flat_is_identity(flat, rng):
    a = rng.uniform(-np.pi / 2, np.pi / 2, 64)
    assert_allclose(s_map(flat, a), a, atol=1e-15)


def test_s_map_pointwise_value():
    m = make_model(0.5, 1.0)
    # direct evaluation of atan(((1-lam)/(1+lam)) tan(pi/4)) = atan(1/3)
    assert_allclose(s_map(m, np.pi / 4), math.atan(1.0 / 3.0), rtol=1e-15)


def test_s_map_odd_fixed_points(model):
    assert s_map(model, 0.0) == 0.0
    assert_allclose(s_map(model, np.pi / 2), np.pi / 2, atol=1e-15)
    assert_allclose(s_map(model, -np.pi / 2), -np.pi / 2, atol=1e-15)
    a = np.linspace(-1.5, 1.5, 11)
    assert_allclose(s_map(model, -a), -np.asarray(s_map(model, a)), atol=1e-15)


def test_s_map_monotone_and_periodic(model, rng):
    a = np.sort(rng.uniform(-np.pi / 2, np.pi / 2, 256))
    v = s_map(model, a)
    assert np.all(np.diff(v) > 0)
    assert_allclose(s_map(model, a + np.pi), v + np.pi, atol=1e-12)


def test_s_inverse_roundtrip(model, rng):
    a = rng.uniform(-np.pi / 2, np.pi / 2, 128)
    assert_allclose(s_inverse(model, s_map(model, a)), a, atol=1e-12)


def test_s_prime_matches_difference_quotient(model, rng):
    a = rng.uniform(-1.4, 1.4, 64)
    h = 1e-6
    fd = (np.asarray(s_map(model, a + h)) - np.asarray(s_map(model, a - h))) / (2 * h)
    assert_allclose(s_prime(model, a), fd, rtol=1e-8, atol=1e-8)


def test_s_trig_identities(model, rng):
    # sin(s(a)) = sqrt((1-lam)/(1+lam)) sqrt(s'(a)) sin(a) and the cosine
    # analogue with the reciprocal prefactor; together they force
    # sin^2 + cos^2 = 1, which pins both prefactors.
    a = rng.uniform(-np.pi / 2, np.pi / 2, 256)
    lam = model.lam
    ratio = np.sqrt((1.0 - lam) / (1.0 + lam))
    root_sp = np.sqrt(s_prime(model, a))
    assert_allclose(np.sin(s_map(model, a)), ratio * root_sp * np.sin(a), atol=1e-12)
    assert_allclose(np.cos(s_map(model, a)), root_sp / ratio * np.cos(a), atol=1e-12)


# --------------------------------------------------------------------------
# Phi and Psi
# --------------------------------------------------------------------------


def test_phi_boundary_center_flat(model):
    z = model.radius * np.exp(1j * np.linspace(0, 2 * np.pi, 17))
    assert_allclose(np.abs(phi_map(model, z)), 1.0, atol=1e-14)
    assert phi_map(model, 0.0) == 0.0
    if model.is_flat:
        w = 0.3 * model.radius * np.exp(0.7j)
        assert_allclose(phi_map(model, w), w / model.radius, atol=1e-15)


def test_phi_rejects_outside(model):
    with pytest.raises(OutOfDisk):
        phi_map(model, model.radius * 1.01)


def test_phi_inverse_roundtrip(model, rng):
    z = rng.uniform(0, model.radius, 64) * np.exp(1j * rng.uniform(0, 2 * np.pi, 64))
    assert_allclose(phi_inverse(model, phi_map(model, z)), z, atol=1e-13)
    r = rng.uniform(0, 1, 64)
    assert_allclose(phi_radial(model, phi_inverse_radial(model, r)), r, atol=1e-13)


def test_psi_map_flat_and_center(model, rng):
    th = rng.uniform(-np.pi, np.pi, 32)
    rp, tp = psi_map(model, np.zeros(32), th)
    assert_allclose(rp, 0.0, atol=1e-15)
    assert_allclose(tp, th, atol=1e-15)
    if model.is_flat:
        rho = rng.uniform(0, model.radius, 32)
        rp, tp = psi_map(model, rho, th)
        assert_allclose(rp, rho / model.radius, atol=1e-15)
        assert_allclose(tp, th, atol=1e-15)


def test_psi_map_pointwise_value():
    m = make_model(0.5, 1.0)
    _, tp = psi_map(m, 1.0, np.pi / 4)
    expected = np.pi / 4 - math.atan2(0.5 * math.sin(np.pi / 2), 1.0 + 0.5 * math.cos(np.pi / 2))
    assert_allclose(tp, expected, rtol=1e-15)
    assert_allclose(tp, math.atan(1.0 / 3.0), rtol=1e-14)


def test_psi_jacobian_matches_difference_quotient(model, rng):
    rho = rng.uniform(0, model.radius * 0.999, 200)
    th = rng.uniform(-np.pi, np.pi, 200)
    h = 1e-6
    _, tp_p = psi_map(model, rho, th + h)
    _, tp_m = psi_map(model, rho, th - h)
    fd = (tp_p - tp_m) / (2 * h)
    assert_allclose(psi_theta_jacobian(model, rho, th), fd, rtol=2e-7, atol=2e-7)


def test_conformal_weight_flat(flat, rng):
    assert_allclose(conformal_weight(flat, rng.uniform(0, 1, 8)), 1.0)


# --------------------------------------------------------------------------
# footpoints
# --------------------------------------------------------------------------


def test_footpoint_through_center(model, rng):
    th = rng.uniform(0, 2 * np.pi, 16)
    beta, alpha = footpoint(model, np.zeros(16), 0.0, th)
    assert_allclose(alpha, 0.0, atol=1e-14)
    assert_allclose(angle_gap(beta, th - np.pi), 0.0, atol=1e-14)


def test_footpoint_flat_closed_form(flat):
    # straight-line case solved by hand: rho=1/2, omega=0, theta=pi/2
    coord = footpoint_phase(flat, PhasePoint(0.5, 0.0, np.pi / 2))
    assert_allclose(coord.alpha, -np.pi / 6, atol=1e-14)
    assert_allclose(angle_gap(coord.beta, -np.pi / 3), 0.0, atol=1e-14)


def test_footpoint_sine_relation(model, rng):
    # sin(alpha_-) = -((1+kappa R^2)/(1+kappa rho^2)) (rho/R) sin(theta-omega)
    n = 2000
    rho = rng.uniform(0, model.radius, n)
    omega = rng.uniform(0, 2 * np.pi, n)
    theta = rng.uniform(0, 2 * np.pi, n)
    _, alpha = footpoint(model, rho, omega, theta)
    expected = (
        -(1.0 + model.lam)
        / (1.0 + model.kappa * rho**2)
        * (rho / model.radius)
        * np.sin(theta - omega)
    )
    assert_allclose(np.sin(alpha), expected, atol=1e-12)


def test_footpoint_against_independent_oracle(model, rng):
    n = 500
    rho = rng.uniform(0, model.radius * 0.9999, n)
    omega = rng.uniform(0, 2 * np.pi, n)
    theta = rng.uniform(0, 2 * np.pi, n)
    beta, alpha = footpoint(model, rho, omega, theta)
    beta_o, alpha_o, r_entry = footpoint_oracle(model, rho, omega, theta)
    assert_allclose(r_entry, model.radius, atol=1e-10)
    assert_allclose(angle_gap(beta, beta_o), 0.0, atol=1e-10)
    assert_allclose(alpha, alpha_o, atol=1e-10)


def test_footpoint_rejects_outside(model):
    with pytest.raises(OutOfDisk):
        footpoint(model, model.radius * 1.01, 0.0, 0.0)


# --------------------------------------------------------------------------
# geodesics
# --------------------------------------------------------------------------


def test_chord_length_flat(flat, rng):
    a = rng.uniform(-np.pi / 2 * 0.99, np.pi / 2 * 0.99, 32)
    b = rng.uniform(0, 2 * np.pi, 32)
    for bi, ai in zip(b, a):
        assert_allclose(geodesic(flat, bi, ai).tau, 2.0 * np.cos(ai), rtol=1e-14)


def test_diameter_time_against_quadrature(model):
    if model.is_flat:
        expected = 2.0 * model.radius
    else:
        expected, err = quad(
            lambda r: 2.0 / (1.0 + model.kappa * r * r), 0.0, model.radius,
            epsabs=1e-13, epsrel=1e-13,
        )
        assert err < 1e-9
    assert_allclose(geodesic(model, 0.3, 0.0).tau, expected, rtol=1e-10)
    if model.kappa > 0:
        rk = np.sqrt(model.kappa)
        assert_allclose(geodesic(model, 0.0, 0.0).tau, 2.0 / rk * np.arctan(rk * model.radius), rtol=1e-14)


def test_exit_time_against_arclength_quadrature(model, rng):
    for a in rng.uniform(-1.4, 1.4, 6):
        arc = geodesic(model, 1.0, a)
        assert_allclose(arc.tau, arclength_quad(model, 1.0, a), rtol=1e-8)
        # the Gauss rule integrates the constant 1 along the arc to tau;
        # 256 nodes covers the near-critical kappa=-0.9 rays, where the
        # arclength factor has a pole just past the exit parameter
        _, w = arc.sample(256)
        assert_allclose(w.sum(), arc.tau, rtol=1e-12)


def test_exit_time_grazing_limit(model):
    a = np.linspace(0.0, np.pi / 2 * (1.0 - 1e-6), 200)
    tau = exit_time(model, a)
    assert np.all(np.diff(tau) < 0)
    assert tau[-1] < 1e-3 * tau[0]


def test_geodesic_endpoints_on_boundary(model, rng):
    for a in rng.uniform(-1.5, 1.5, 8):
        arc = geodesic(model, 2.0, a)
        assert_allclose(abs(arc.point(0.0)), model.radius, atol=1e-13)
        assert_allclose(abs(arc.point(arc.x_exit)), model.radius, atol=1e-12)
        assert_allclose(angle_gap(np.angle(arc.point(0.0)), 2.0), 0.0, atol=1e-13)


def test_geodesic_exit_matches_scattering(model, rng):
    for a in rng.uniform(-1.5, 1.5, 8):
        arc = geodesic(model, 0.7, a)
        beta_exit, _ = antipodal_scattering(model, 0.7, a)
        assert_allclose(angle_gap(np.angle(arc.point(arc.x_exit)), beta_exit), 0.0, atol=1e-12)


def test_tangent_ray_rejected(model):
    with pytest.raises(TangentRay):
        geodesic(model, 0.0, np.pi / 2)
    with pytest.raises(TangentRay):
        geodesic(model, 0.0, -np.pi / 2)


def test_footpoint_inverts_geodesic(model, rng):
    # any interior point of the arc, with the travel direction, footpoints
    # back to the entry data
    for a in rng.uniform(-1.45, 1.45, 10):
        beta = float(rng.uniform(0, 2 * np.pi))
        arc = geodesic(model, beta, a)
        x = np.linspace(0.05, 0.95, 7) * arc.x_exit
        z = arc.point(x)
        b2, a2 = footpoint(model, np.abs(z), np.angle(z), arc.direction(x))
        assert_allclose(angle_gap(b2, beta), 0.0, atol=1e-10)
        assert_allclose(a2, a, atol=1e-10)


def test_arc_time_flat_is_identity(flat):
    x = np.linspace(0, 2, 9)
    assert_allclose(arc_time(flat, x), x)


# --------------------------------------------------------------------------
# scattering
# --------------------------------------------------------------------------


def test_scattering_diameter(model, rng):
    b = rng.uniform(0, 2 * np.pi, 16)
    beta_s, alpha_s = antipodal_scattering(model, b, np.zeros(16))
    assert_allclose(angle_gap(beta_s, b + np.pi), 0.0, atol=1e-14)
    assert_allclose(alpha_s, 0.0, atol=1e-15)


def test_scattering_flat_form(flat, rng):
    b = rng.uniform(0, 2 * np.pi, 32)
    a = rng.uniform(-1.5, 1.5, 32)
    beta_s, alpha_s = antipodal_scattering(flat, b, a)
    assert_allclose(angle_gap(beta_s, b + np.pi + 2 * a), 0.0, atol=1e-13)
    assert_allclose(alpha_s, -a)
    beta_full, alpha_full = scattering(flat, b, a)
    assert_allclose(beta_full, beta_s)
    assert_allclose(alpha_full, np.pi - a)


def test_antipodal_scattering_involution(model, rng):
    b = rng.uniform(0, 2 * np.pi, 64)
    a = rng.uniform(-1.5, 1.5, 64)
    b2, a2 = antipodal_scattering(model, *antipodal_scattering(model, b, a))
    assert_allclose(angle_gap(b2, b), 0.0, atol=1e-12)
    assert_allclose(a2, a, atol=1e-15)


def test_mobius_exit_parameter_flat(flat):
    assert_allclose(mobius_exit_parameter(flat, 0.0), 2.0)
