"""Closed-form propagators: frozen values, limits and factorization."""

import numpy as np
import pytest

from feynpath import (CausticError, InputDomainError, OscillatorParams,
                      ParticleParams, SpacetimeEndpoints,
                      TotalInternalReflectionError, free_action, free_kernel,
                      ho_action, ho_kernel, quadratic_prefactor_check,
                      refraction_action, slice_amplitude, snell_refract)
from feynpath.quadrature import compose_kernels

P = ParticleParams()

# frozen reference values (30-digit evaluation of the closed forms)
K_FREE_COINCIDENT = 0.2820947917738781 * (1.0 - 1.0j)
K_FREE_DISPLACED = 0.38280491754448324 - 0.1123180225772192j
K_HO_QUARTER = -0.084958115774324651 - 0.38979104871196284j
MOD_FREE_T1 = 0.3989422804014327


def vec_free(ends_time, x_a):
    # free_kernel lifted to arrays of final points, for quadrature glue
    return lambda x: np.array(
        [free_kernel(SpacetimeEndpoints(x_a, xb, 0.0, ends_time), P)
         for xb in np.atleast_1d(x)])


def test_free_kernel_coincident_point():
    k = free_kernel(SpacetimeEndpoints(0.0, 0.0, 0.0, 1.0), P)
    assert abs(k - K_FREE_COINCIDENT) < 1e-15
    assert abs(abs(k) - MOD_FREE_T1) < 1e-15
    assert abs(np.angle(k) + np.pi / 4) < 1e-15


def test_free_kernel_displaced_point():
    k = free_kernel(SpacetimeEndpoints(0.0, 1.0, 0.0, 1.0), P)
    assert abs(k - K_FREE_DISPLACED) < 1e-15
    assert abs(k - MOD_FREE_T1 * np.exp(1j * (0.5 - np.pi / 4))) < 1e-15


def test_free_kernel_modulus_only_depends_on_time():
    mods = [abs(free_kernel(SpacetimeEndpoints(xa, xb, 0.0, 0.7), P))
            for xa, xb in ((0.0, 0.0), (-1.3, 2.1), (5.0, 5.5))]
    assert np.ptp(mods) < 1e-15 * mods[0]


def test_free_action_straight_line():
    ends = SpacetimeEndpoints(-0.4, 1.1, 0.0, 2.0)
    assert free_action(ends, P) == pytest.approx(1.5 ** 2 / 4.0, rel=1e-15)
    heavy = ParticleParams(mass=3.0)
    assert free_action(ends, heavy) == pytest.approx(3 * 1.5 ** 2 / 4, rel=1e-15)


def test_free_kernel_delta_limit():
    # int dx K(x, x_a; T) phi(x) -> phi(x_a) as T -> 0+
    T, x_a = 1e-4, 0.3
    phi = lambda x: np.exp(-0.5 * (np.asarray(x) - 0.7) ** 2)
    alpha = P.mass / (2.0 * P.hbar * T)
    got = compose_kernels(phi, vec_free(T, x_a), alpha, x_a, half_width=0.6)
    assert abs(got - phi(x_a)) < 1e-3


def test_ho_action_quarter_period():
    ends = SpacetimeEndpoints(1.0, 1.0, 0.0, np.pi / 2.0)
    assert ho_action(ends) == pytest.approx(-1.0, abs=1e-12)


def test_ho_action_zero_endpoints():
    ends = SpacetimeEndpoints(0.0, 0.0, 0.0, 1.3)
    assert ho_action(ends) == 0.0


def test_ho_action_free_limit():
    ends = SpacetimeEndpoints(0.2, 1.4, 0.0, 0.9)
    osc = OscillatorParams(omega=0.0)
    assert ho_action(ends, osc) == free_action(ends, P)


def test_ho_kernel_quarter_period_value():
    k = ho_kernel(SpacetimeEndpoints(1.0, 1.0, 0.0, np.pi / 2.0))
    assert abs(k - K_HO_QUARTER) / abs(K_HO_QUARTER) < 1e-14
    ref = MOD_FREE_T1 * np.exp(-1j * np.pi / 4.0) * np.exp(-1j)
    assert abs(k - ref) / abs(ref) < 1e-14


def test_ho_kernel_free_dispatch():
    ends = SpacetimeEndpoints(0.3, -0.8, 0.0, 1.7)
    k0 = ho_kernel(ends, OscillatorParams(omega=0.0))
    assert k0 == free_kernel(ends, P)


def test_ho_kernel_small_omega_continuity():
    ends = SpacetimeEndpoints(0.5, -0.2, 0.0, 1.0)
    k = ho_kernel(ends, OscillatorParams(omega=1e-6))
    assert abs(k - free_kernel(ends, P)) < 1e-8


def test_ho_kernel_caustic():
    with pytest.raises(CausticError):
        ho_kernel(SpacetimeEndpoints(0.0, 1.0, 0.0, np.pi))
    with pytest.raises(CausticError):
        ho_kernel(SpacetimeEndpoints(0.0, 1.0, 0.0, 2.0 * np.pi))


def test_ho_kernel_endpoint_exchange_symmetry():
    a = ho_kernel(SpacetimeEndpoints(0.7, -0.4, 0.0, 1.1))
    b = ho_kernel(SpacetimeEndpoints(-0.4, 0.7, 0.0, 1.1))
    assert a == b


def test_endpoint_time_ordering():
    with pytest.raises(InputDomainError):
        SpacetimeEndpoints(0.0, 1.0, 1.0, 1.0)


def test_slice_amplitude_is_reciprocal_free_prefactor():
    eps = 0.05
    k = free_kernel(SpacetimeEndpoints(0.0, 0.0, 0.0, eps), P)
    assert abs(1.0 / slice_amplitude(eps, P) - k) < 1e-14 * abs(k)
    with pytest.raises(InputDomainError):
        slice_amplitude(0.0, P)


def test_composition_free():
    # int dx_c K(b, c; T2) K(c, a; T1) = K(b, a; T1 + T2)
    x_a, x_b, t1, t2 = -0.3, 0.9, 0.6, 0.8
    late = lambda x: np.array(
        [free_kernel(SpacetimeEndpoints(xc, x_b, 0.0, t2), P)
         for xc in np.atleast_1d(x)])
    alpha = P.mass / (2 * P.hbar) * (1.0 / t1 + 1.0 / t2)
    mu = (t2 * x_a + t1 * x_b) / (t1 + t2)
    got = compose_kernels(late, vec_free(t1, x_a), alpha, mu, half_width=40.0)
    want = free_kernel(SpacetimeEndpoints(x_a, x_b, 0.0, t1 + t2), P)
    assert abs(got - want) / abs(want) < 1e-6


def test_composition_harmonic():
    x_a, x_b, t1, t2, w = 0.4, -0.2, 0.7, 0.9, 1.0
    osc = OscillatorParams(omega=w)

    def seg(x_from, t_dur):
        return lambda x: np.array(
            [ho_kernel(SpacetimeEndpoints(x_from, xc, 0.0, t_dur), osc)
             for xc in np.atleast_1d(x)])

    late = lambda x: np.array(
        [ho_kernel(SpacetimeEndpoints(xc, x_b, 0.0, t2), osc)
         for xc in np.atleast_1d(x)])
    c = P.mass * w / (2 * P.hbar)
    alpha = c * (np.cos(w * t1) / np.sin(w * t1) + np.cos(w * t2) / np.sin(w * t2))
    mu = c * (x_a / np.sin(w * t1) + x_b / np.sin(w * t2)) / alpha
    got = compose_kernels(late, seg(x_a, t1), alpha, mu, half_width=40.0)
    want = ho_kernel(SpacetimeEndpoints(x_a, x_b, 0.0, t1 + t2), osc)
    assert abs(got - want) / abs(want) < 1e-6


def test_snell_pinned_angle():
    got = snell_refract(1.0, 1.5, np.deg2rad(30.0))
    assert np.rad2deg(got) == pytest.approx(19.47122063, abs=1e-4)


def test_snell_identity_media():
    th = 0.61
    assert snell_refract(1.33, 1.33, th) == pytest.approx(th, rel=1e-15)


def test_snell_total_internal_reflection():
    with pytest.raises(TotalInternalReflectionError):
        snell_refract(1.5, 1.0, np.deg2rad(60.0))


def test_snell_against_least_path_minimization():
    # crossing point of the least optical path n_a L_a + n_b L_b obeys
    # the same sine law the arcsine evaluation encodes
    n_a, n_b, d1, d2, x_end = 1.0, 1.5, 1.0, 1.0, 1.0
    xc = np.linspace(0.0, x_end, 200001)
    path = n_a * np.hypot(d1, xc) + n_b * np.hypot(d2, x_end - xc)
    xc_star = xc[np.argmin(path)]
    theta_a = np.arctan2(xc_star, d1)
    theta_b = np.arctan2(x_end - xc_star, d2)
    assert snell_refract(n_a, n_b, theta_a) == pytest.approx(theta_b, abs=1e-5)


def test_refraction_action_straight_path_matches_free():
    ends = SpacetimeEndpoints(-0.5, 1.5, 0.0, 2.0)
    x_mid = 0.5  # on the straight line at t_c = 1
    s = refraction_action(-0.5, x_mid, 1.5, 1.0, 2.0, P)
    assert s == pytest.approx(free_action(ends, P), rel=1e-14)


def test_refraction_action_two_segments():
    s = refraction_action(0.0, 1.0, 1.0, 0.5, 1.5, P)
    v_a, v_b = 1.0 / 0.5, 0.0
    assert s == pytest.approx(0.5 * (v_a * 1.0 + v_b * 0.0), rel=1e-14)
    with pytest.raises(InputDomainError):
        refraction_action(0.0, 1.0, 1.0, 1.5, 1.5, P)


def test_reflection_law_from_bend_time():
    # optimizing the bend time equalizes segment speeds
    x_a, x_c, x_b, T = 0.0, 1.0, 0.4, 2.0
    tc = np.linspace(1e-3, T - 1e-3, 40001)
    s = np.array([refraction_action(x_a, x_c, x_b, t, T, P) for t in tc])
    t_star = tc[np.argmin(s)]
    v_a = (x_c - x_a) / t_star
    v_b = (x_b - x_c) / (T - t_star)
    assert abs(abs(v_a) - abs(v_b)) < 1e-3


def test_prefactor_check_exact_inputs():
    osc = OscillatorParams(omega=1.0)
    xs = np.linspace(-1.0, 1.0, 5)
    ends = [SpacetimeEndpoints(a, b, 0.0, 1.0) for a in xs for b in xs]
    ks = [ho_kernel(e, osc) for e in ends]
    ss = [ho_action(e, osc) for e in ends]
    assert quadratic_prefactor_check(ks, ss) < 1e-13


def test_prefactor_check_detects_mismatch():
    osc = OscillatorParams(omega=1.0)
    xs = np.linspace(-1.0, 1.0, 5)
    ends = [SpacetimeEndpoints(a, b, 0.0, 1.0) for a in xs for b in xs]
    ks = np.array([ho_kernel(e, osc) for e in ends])
    ss = np.array([ho_action(e, osc) for e in ends])
    ks[3] *= 1.001
    assert quadratic_prefactor_check(ks, ss) > 5e-4


def test_prefactor_check_needs_samples():
    with pytest.raises(InputDomainError):
        quadratic_prefactor_check([1.0 + 0j], [0.0])
