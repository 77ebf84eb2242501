"""Built-in oracle suite behind the --self-test flag.

Each check recomputes a quantity with an independent closed form or a
second numerical route and compares at a pinned tolerance.  The suite
is deliberately quick (seconds, not minutes); the full statistical
acceptance runs live in the test suite.
"""

from __future__ import annotations

import warnings

import numpy as np

from . import coherent, grin, kernels, lattice, media, pimc, potentials


def _check_free_kernel():
    ends = kernels.SpacetimeEndpoints(0.0, 0.0, 0.0, 1.0)
    k = kernels.free_kernel(ends)
    ref = complex(np.sqrt(1.0 / (2.0 * np.pi)) * np.exp(-0.25j * np.pi))
    return abs(k - ref), 1e-14


def _check_ho_action():
    #quarter period, x_a = x_b = 1: S = -1
    ends = kernels.SpacetimeEndpoints(1.0, 1.0, 0.0, 0.5 * np.pi)
    s = kernels.ho_action(ends, kernels.OscillatorParams(1.0, 1.0, 1.0))
    return abs(s + 1.0), 1e-12


def _check_recursion():
    part = kernels.ParticleParams(1.0, 1.0)
    osc = kernels.OscillatorParams(1.0, 1.0, 1.3)
    ends = kernels.SpacetimeEndpoints(-0.4, 0.9, 0.0, 1.1)
    sl = lattice.TimeSlicing.for_duration(10, 1.1)
    k = lattice.gaussian_recursion(ends, part, potentials.harmonic(1.0, 1.3), sl)
    return abs(k - kernels.ho_kernel(ends, osc)), 1e-12


def _check_grid_transfer():
    part = kernels.ParticleParams(1.0, 1.0)
    ends = kernels.SpacetimeEndpoints(0.3, -0.7, 0.0, 1.0)
    sl = lattice.TimeSlicing.for_duration(20, 1.0)
    grid = lattice.SpatialGrid(-8.0, 8.0, 1024)
    k = lattice.grid_transfer(ends, part, potentials.free(), sl, grid)
    ref = kernels.free_kernel(ends, part)
    return abs(k - ref) / abs(ref), 1e-3


def _check_snell():
    got = kernels.snell_refract(1.0, 1.5, np.pi / 6.0)
    return abs(got - np.arcsin(1.0 / 3.0)), 1e-14


def _check_double_slit():
    geom = lattice.SlitGeometry((-1.0, 1.0), (0.2, 0.2), 1.0, 1.0, 1.0)
    res = lattice.double_slit_pattern(geom, np.linspace(-8, 8, 129))
    resid = float(np.max(np.abs(res.total - res.single_1 - res.single_2 - res.cross)))
    return resid, 1e-12


def _check_grin_vs_ho():
    med = grin.GrinMedium(1.5, 0.8, np.pi / 10.0)
    z, xa, xb = 1.2, 0.2, -0.1
    k = grin.grin_kernel(xa, xb, z, med)
    kn0 = med.k_vacuum * med.n0
    osc = kernels.OscillatorParams(kn0, 1.0, 0.8)
    ref = kernels.ho_kernel(kernels.SpacetimeEndpoints(xa, xb, 0.0, z), osc)
    ref *= np.exp(1j * kn0 * z)
    return abs(k - ref) / abs(ref), 1e-8


def _check_envelope_free():
    med = grin.GrinMedium(1.0, 0.0, np.pi / 10.0)
    env = grin.solve_envelope(med, (0.0, 2.0), init=(1.0, 1.0j))
    worst = 0.0
    for z in (0.5, 1.0, 2.0):
        worst = max(worst, abs(env.s(z) - np.hypot(1.0, z)),
                    abs(env.gamma(z) - np.arctan(z)))
    return worst, 1e-9


def _check_dpa():
    H = coherent.QuadraticHamiltonian.degenerate_amplifier(1.0, 0.4)
    xyz = coherent.solve_xyz(H, 0.0, 1.5)
    a, b = 0.7 + 0.2j, -0.3 + 0.5j
    k1 = coherent.quadratic_propagator(a, b, H, xyz)
    k2 = coherent.dpa_propagator(a, b, 0.0, 1.5, 1.0, 0.4)
    return abs(k1 - k2), 1e-8


def _check_expectation():
    kappa, t, alpha0 = 0.3, 1.0, 1.0 + 0.0j

    def prop(beta, tb, alpha, ta):
        return coherent.dpa_propagator(alpha, beta, ta, tb, 0.0, kappa)

    got = coherent.expectation_annihilation([(1.0, alpha0)], prop, t)
    u = 2.0 * kappa * t
    ref = alpha0 * np.cosh(u) - 1j * np.conj(alpha0) * np.sinh(u)
    return abs(got - ref), 1e-6


def _check_pimc_static():
    #2-bead enumerable chain: acceptance rule vs Boltzmann weights
    sys = pimc.ThermalSystem(1.0, potentials.harmonic(1.0, 1.0), 1.0)
    poly = pimc.RingPolymer(np.array([0.3, -0.2]), sys.beta)
    s = pimc.primitive_action(poly, sys)
    dtau = 0.5
    ref = (1.0 * (0.5**2) / (2 * dtau) * 2
           + dtau * (0.5 * 0.3**2 + 0.5 * 0.2**2))
    return abs(s - ref), 1e-12


def _check_spdc():
    p = media.spdc_probability(0.0, 1.0, 1.0)
    ref = (1.0 - np.exp(-1.0)) ** 2
    dk = 3.7
    lossless = media.spdc_probability(dk, 0.0, 2.0)
    ref2 = np.sinc(dk * 2.0 / (2.0 * np.pi)) ** 2
    return max(abs(p - ref), abs(lossless - ref2)), 1e-12


def _check_spdc_vertex():
    medium = media.DispersiveMedium1D.from_constants(35.0, 41.0, 2.5, 0.8, 1.0)
    numeric = media.pair_probability_numeric(medium)
    closed = media.spdc_probability(2.5, 0.8, 1.0)
    return abs(numeric - closed), 1e-9


def _check_emission():
    env = media.EmitterEnvironment(2.0, 0.7, 1.3, 2.2)
    lhs = media.spontaneous_rate(env) / env.gamma0
    rhs = 4.0 * np.pi * media.imag_green_loop(env) / env.omega0
    return abs(lhs - rhs), 1e-14


def _check_dielectric():
    model = media.EffectiveDielectricModel(1.0, 0.5, 1)
    e0 = media.effective_dielectric(0.0, model)
    off = media.EffectiveDielectricModel(1.0, 0.5, 0)
    e_off = media.effective_dielectric(0.7, off)
    return max(abs(e0 - 1.5), abs(e_off - 1.0)), 1e-14


CHECKS = [
    ("free kernel closed form", _check_free_kernel),
    ("oscillator action quarter period", _check_ho_action),
    ("gaussian recursion vs closed form", _check_recursion),
    ("grid transfer vs closed form", _check_grid_transfer),
    ("refraction angle", _check_snell),
    ("double slit decomposition", _check_double_slit),
    ("graded-index kernel vs mapped oscillator", _check_grin_vs_ho),
    ("free-space envelope", _check_envelope_free),
    ("amplifier propagator closed form vs integration", _check_dpa),
    ("annihilation expectation vs mode mixing", _check_expectation),
    ("ring-polymer action arithmetic", _check_pimc_static),
    ("pair probability frozen values", _check_spdc),
    ("pair probability vertex quadrature", _check_spdc_vertex),
    ("emission rate identity", _check_emission),
    ("effective dielectric limits", _check_dielectric),
]


def run_selftest(stream) -> int:
    """Run every check; print one line each; return count of failures."""
    failures = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for name, fn in CHECKS:
            try:
                dev, tol = fn()
                ok = dev <= tol
            except Exception as exc:  # a crash counts as a failure
                stream.write(f"FAIL {name}: {exc}\n")
                failures += 1
                continue
            mark = "ok  " if ok else "FAIL"
            stream.write(f"{mark} {name}: deviation {dev:.3e} (tol {tol:.0e})\n")
            if not ok:
                failures += 1
    return failures
