"""Graded-index propagation: rays, kernels, envelope, modes, beams."""

import warnings

import numpy as np
import pytest

from feynpath import (BackendMismatchError, FocalPlaneError, GrinMedium,
                      InputDomainError, ModeSumWarning, ParaxialityWarning,
                      SpacetimeEndpoints, eigenmodes, grin_kernel, ho_kernel,
                      mode_kernel, propagate_beam, solve_envelope, solve_rays)
from feynpath.kernels import OscillatorParams
from feynpath.quadrature import compose_kernels

LAM = 2.0 * np.pi * 0.05  # lambdabar = 0.05
MED = GrinMedium(1.5, 0.8, LAM)  # constant-focusing reference medium
KN0 = MED.k_vacuum * MED.n0


def test_constant_g_rays_closed_form():
    g = 0.8
    rays = solve_rays(MED, (0.0, 10.0))
    zs = np.linspace(0.05, 10.0, 97)
    for z in zs:
        assert abs(rays.h1(z) - np.sin(g * z) / g) < 1e-8
        assert abs(rays.h2(z) - np.cos(g * z)) < 1e-8
    assert rays.wronskian_drift() < 1e-8


def test_free_rays_are_straight_lines():
    rays = solve_rays(GrinMedium(1.0, 0.0, LAM), (0.0, 5.0))
    for z in (0.3, 1.7, 4.9):
        assert abs(rays.h1(z) - z) < 1e-12
        assert abs(rays.h2(z) - 1.0) < 1e-12


def test_variable_profile_wronskian():
    med = GrinMedium(1.5, lambda z: 0.3 + 0.1 * np.sin(z), LAM)
    assert solve_rays(med, (0.0, 10.0)).wronskian_drift() < 1e-8
    zs = np.linspace(0.0, 10.0, 41)
    spl = GrinMedium.with_profile(1.5, zs, 0.3 + 0.1 * np.sin(zs), LAM)
    assert solve_rays(spl, (0.0, 10.0)).wronskian_drift() < 1e-8


def test_free_kernel_is_fresnel():
    med = GrinMedium(1.5, 0.0, LAM)
    kn0 = med.k_vacuum * med.n0
    for xa, xb, z in ((0.0, 0.0, 1.0), (0.4, -0.3, 0.7), (1.0, 1.2, 2.5)):
        want = (np.sqrt(kn0 / (2j * np.pi * z)) * np.exp(1j * kn0 * z)
                * np.exp(0.5j * kn0 * (xb - xa) ** 2 / z))
        got = grin_kernel(xa, xb, z, med)
        assert abs(got - want) / abs(want) < 1e-10


def test_constant_g_kernel_maps_to_oscillator():
    # longitudinal coordinate as time, n0/lambdabar as mass, g as frequency
    osc = OscillatorParams(mass=KN0, hbar=1.0, omega=0.8)
    for xa, xb, z in ((0.0, 0.0, 1.0), (0.5, -0.4, 0.9), (-0.2, 0.3, 2.2)):
        want = np.exp(1j * KN0 * z) * ho_kernel(
            SpacetimeEndpoints(xa, xb, 0.0, z), osc)
        got = grin_kernel(xa, xb, z, MED)
        assert abs(got - want) / abs(want) < 1e-8


def test_focal_plane_raises():
    with pytest.raises(FocalPlaneError):
        grin_kernel(0.1, 0.2, np.pi / 0.8, MED)


def test_kernel_composition_over_intermediate_plane():
    g, z1, z2, xa, xb = 0.8, 0.6, 0.9, 0.35, -0.2
    c = 0.5 * KN0 * g
    alpha = c * (1.0 / np.tan(g * z1) + 1.0 / np.tan(g * z2))
    mu = c * (xa / np.sin(g * z1) + xb / np.sin(g * z2)) / alpha
    got = compose_kernels(lambda y: grin_kernel(y, xb, z2, MED),
                          lambda y: grin_kernel(xa, y, z1, MED), alpha, mu)
    want = grin_kernel(xa, xb, z1 + z2, MED)
    assert abs(got - want) / abs(want) < 1e-5


def test_envelope_constant_g_is_stationary():
    env = solve_envelope(MED, (0.0, 4.0))
    s0 = np.sqrt(1.5 / 0.8)
    for z in (0.0, 1.3, 2.6, 4.0):
        assert abs(env.s(z) - s0) < 1e-8
        assert abs(env.gamma(z) - 0.8 * z) < 1e-8
        assert abs(env.s_slope(z)) < 1e-8
    assert env.invariant == pytest.approx(1.5, abs=1e-12)
    assert env.invariant_drift() < 1e-8


def test_envelope_free_space():
    med = GrinMedium(1.0, 0.0, LAM)
    with pytest.raises(InputDomainError):
        solve_envelope(med, (0.0, 3.0))  # default init needs g > 0
    env = solve_envelope(med, (0.0, 3.0), init=(1.0, 1j))
    for z in (0.0, 0.8, 1.9, 3.0):
        assert abs(env.s(z) - np.sqrt(1.0 + z * z)) < 1e-8
        assert abs(env.gamma(z) - np.arctan(z)) < 1e-8
    assert env.invariant_drift() < 1e-8


def test_envelope_invariant_variable_profile():
    med = GrinMedium(1.5, lambda z: 0.5 + 0.2 * np.cos(z), LAM)
    assert solve_envelope(med, (0.0, 10.0)).invariant_drift() < 1e-8


def test_eigenmodes_orthonormal():
    x = np.linspace(-3.0, 3.0, 3001)
    env = solve_envelope(MED, (0.0, 1.0))
    m = eigenmodes(x, 0.7, MED, env, 10)
    gram = (x[1] - x[0]) * (np.conj(m) @ m.T)
    assert np.max(np.abs(gram - np.eye(11))) < 1e-6


def test_mode_phase_advance_constant_g():
    # stationary envelope: the z_b basis is the z_a basis rephased by
    # e^{-i (n + 1/2) g dz} mode by mode
    x = np.linspace(-2.5, 2.5, 1201)
    env = solve_envelope(MED, (0.0, 1.0))
    m_a = eigenmodes(x, 0.0, MED, env, 6)
    m_b = eigenmodes(x, 1.0, MED, env, 6)
    ph = np.exp(-1j * (np.arange(7) + 0.5) * 0.8)
    assert np.max(np.abs(m_b - ph[:, None] * m_a)) < 1e-8


def test_mode_propagation_matches_kernel_route():
    n0, g, lamb = 1.5, 0.3, 0.01
    med = GrinMedium(n0, g, 2.0 * np.pi * lamb)
    x = np.linspace(-1.5, 1.5, 1500)
    env = solve_envelope(med, (0.0, 2.0))
    psi2 = eigenmodes(x, 0.0, med, env, 2)[2]
    out = propagate_beam(psi2, x, 0.0, 2.0, med, via="kernel")
    want = np.exp(1j * med.k_vacuum * n0 * 2.0) * eigenmodes(x, 2.0, med, env, 2)[2]
    assert np.max(np.abs(out - want)) / np.max(np.abs(want)) < 1e-6


def test_mode_kernel_error_decays_with_order():
    want = grin_kernel(0.0, 0.0, 1.0, MED)
    env = solve_envelope(MED, (0.0, 1.0))
    errs = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModeSumWarning)
        for n in (8, 16, 32, 64):
            got = mode_kernel(0.0, 0.0, 0.0, 1.0, MED, n, env=env)
            errs.append(abs(got - want) / abs(want))
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 0.6 * errs[0]


def test_mode_kernel_tail_reporting():
    env = solve_envelope(MED, (0.0, 1.0))
    with pytest.warns(ModeSumWarning):
        mode_kernel(0.0, 0.0, 0.0, 1.0, MED, 16, env=env)
    with pytest.raises(BackendMismatchError):
        mode_kernel(0.0, 0.0, 0.0, 1.0, MED, 16, env=env, on_tail="raise")


def test_self_imaging_over_one_period():
    # kernel route splits the full period around its focal planes; the
    # field revives with the carrier times the half-integer mode phase -1
    n0, g, lamb = 1.5, 0.3, 0.01
    med = GrinMedium(n0, g, 2.0 * np.pi * lamb)
    x = np.linspace(-1.5, 1.5, 2000)
    psi = np.exp(-(x - 0.3) ** 2 / (2.0 * 0.2 ** 2)).astype(complex)
    period = 2.0 * np.pi / g
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        out = propagate_beam(psi, x, 0.0, period, med, via="kernel")
    want = -np.exp(1j * med.k_vacuum * n0 * period) * psi
    assert np.max(np.abs(out - want)) / np.max(np.abs(psi)) < 1e-6
    p_in = np.trapezoid(np.abs(psi) ** 2, x)
    p_out = np.trapezoid(np.abs(out) ** 2, x)
    assert abs(p_out / p_in - 1.0) < 1e-6


def test_free_space_gaussian_beam_width():
    med = GrinMedium(1.0, 0.0, 2.0 * np.pi * 0.2)
    x = np.linspace(-8.0, 8.0, 1024)
    w0, z = 1.0, 2.0
    psi = np.exp(-x ** 2 / (2.0 * w0 ** 2)).astype(complex)
    out = propagate_beam(psi, x, 0.0, z, med, via="kernel")
    rho = np.abs(out) ** 2
    var = np.trapezoid(x ** 2 * rho, x) / np.trapezoid(rho, x)
    z_r = med.n0 * w0 ** 2 / med.lambdabar
    assert np.sqrt(2.0 * var) == pytest.approx(w0 * np.sqrt(1 + (z / z_r) ** 2),
                                               rel=1e-6)
    assert np.trapezoid(rho, x) == pytest.approx(np.trapezoid(np.abs(psi) ** 2, x),
                                                 rel=1e-6)


def test_propagate_beam_backend_verification():
    n0, g, lamb = 1.5, 0.3, 0.01
    med = GrinMedium(n0, g, 2.0 * np.pi * lamb)
    x = np.linspace(-1.5, 1.5, 1500)
    psi = np.exp(-(x - 0.3) ** 2 / (2.0 * 0.15 ** 2)).astype(complex)
    ok = propagate_beam(psi, x, 0.0, 1.0, med, via="modes", n_modes=60,
                        verify=True, verify_tol=1e-4)
    assert ok.shape == x.shape
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ModeSumWarning)
        with pytest.raises(BackendMismatchError):
            propagate_beam(psi, x, 0.0, 1.0, med, via="modes", n_modes=2,
                           verify=True, verify_tol=1e-4)


def test_paraxiality_warning():
    x = np.linspace(-2.0, 2.0, 400)
    psi = np.exp(-x ** 2).astype(complex)
    with pytest.warns(ParaxialityWarning):
        propagate_beam(psi, x, 0.0, 0.5, MED, via="kernel")


def test_grin_validation():
    with pytest.raises(InputDomainError):
        GrinMedium(-1.0, 0.5, LAM)
    with pytest.raises(InputDomainError):
        GrinMedium(1.5, 0.5, 0.0)
    with pytest.raises(InputDomainError):
        GrinMedium.with_profile(1.5, [0, 1, 2], [0.1, 0.2, 0.3], LAM)
    with pytest.raises(InputDomainError):
        solve_rays(MED, (1.0, 1.0))
    with pytest.raises(InputDomainError):
        grin_kernel(0.0, 0.0, -1.0, MED)
    with pytest.raises(InputDomainError):
        mode_kernel(0.0, 0.0, 1.0, 1.0, MED, 8)
    x = np.linspace(-1.0, 1.0, 64)
    with pytest.raises(InputDomainError):
        propagate_beam(np.zeros(63, complex), x, 0.0, 1.0, MED)
    with pytest.raises(InputDomainError):
        propagate_beam(np.zeros(64, complex), x, 0.0, 1.0, MED, via="saddle")
