"""Paraxial propagation in graded-index media.

The refractive index n^2 = n0^2 [1 - g(z)^2 x^2] maps the paraxial
equation onto a quadratic-potential problem with the longitudinal
coordinate playing the role of time and n0/lambdabar the role of the
mass.  Three routes to the transverse propagator are implemented: the
ray-pair closed form, a complex envelope carrying amplitude and Gouy
phase, and a sum over transverse eigenmodes built on that envelope.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .errors import (BackendMismatchError, FocalPlaneError, InputDomainError,
                     ModeSumWarning, ParaxialityWarning)

_ODE_OPTS = dict(rtol=1e-11, atol=1e-12, dense_output=True, method="DOP853")
_TAIL_RATIO = 1e-8


@dataclass(frozen=True)
class GrinMedium:
    """Axis index n0, focusing profile g(z) and vacuum wavelength."""
    n0: float
    g: object
    wavelength: float

    def __post_init__(self):
        if self.n0 <= 0:
            raise InputDomainError("axis index n0 must be positive")
        if self.wavelength <= 0:
            raise InputDomainError("wavelength must be positive")

    @property
    def lambdabar(self) -> float:
        return self.wavelength / (2.0 * np.pi)

    @property
    def k_vacuum(self) -> float:
        return 1.0 / self.lambdabar

    def g_of(self, z):
        if callable(self.g):
            return self.g(z)
        return self.g * np.ones_like(np.asarray(z, dtype=float)) if np.ndim(z) else float(self.g)

    @classmethod
    def with_profile(cls, n0: float, z_samples, g_samples, wavelength: float) -> "GrinMedium":
        z_samples = np.asarray(z_samples, dtype=float)
        g_samples = np.asarray(g_samples, dtype=float)
        if z_samples.ndim != 1 or z_samples.shape != g_samples.shape or z_samples.size < 4:
            raise InputDomainError("profile needs matching 1d arrays, >= 4 points")
        if np.any(np.diff(z_samples) <= 0):
            raise InputDomainError("profile abscissae must increase strictly")
        return cls(n0, CubicSpline(z_samples, g_samples), wavelength)


@dataclass(frozen=True)
class RayPair:
    """Two independent solutions of H'' + g^2 H = 0 with their slopes."""
    h1: Callable
    h1_slope: Callable
    h2: Callable
    h2_slope: Callable
    z_a: float
    z_b: float

    def wronskian_drift(self, n_probe: int = 65) -> float:
        """Max relative drift of H2 H1' - H1 H2' from its initial value."""
        zs = np.linspace(self.z_a, self.z_b, n_probe)
        w = self.h2(zs) * self.h1_slope(zs) - self.h1(zs) * self.h2_slope(zs)
        return float(np.max(np.abs(w - w[0])) / max(abs(w[0]), 1e-300))


def solve_rays(medium: GrinMedium, z_span, init=((0.0, 1.0), (1.0, 0.0))) -> RayPair:
    """Integrate the ray equation for two initial-condition pairs.

    Defaults produce the sine-like ray H1 (0 height, unit slope) and
    the cosine-like ray H2 (unit height, 0 slope) at z_span[0].
    """
    z_a, z_b = float(z_span[0]), float(z_span[1])
    if not z_b > z_a:
        raise InputDomainError("z_span must increase")
    (h1_0, h1p_0), (h2_0, h2p_0) = init

    def rhs(z, y):
        g2 = medium.g_of(z) ** 2
        return [y[1], -g2 * y[0], y[3], -g2 * y[2]]

    sol = solve_ivp(rhs, (z_a, z_b), [h1_0, h1p_0, h2_0, h2p_0], **_ODE_OPTS)
    if not sol.success:
        raise InputDomainError(f"ray integration failed: {sol.message}")
    f = sol.sol
    return RayPair(h1=lambda z: f(z)[0], h1_slope=lambda z: f(z)[1],
                   h2=lambda z: f(z)[2], h2_slope=lambda z: f(z)[3],
                   z_a=z_a, z_b=z_b)


def grin_kernel(x_a, x_b, z: float, medium: GrinMedium, rays: RayPair = None):
    """Transverse propagator over [0, z] from the ray pair.

    K = sqrt(k n0 / (2 pi i H1)) e^{i k n0 z}
        exp[ i k n0 (H1' x_b^2 + H2 x_a^2 - 2 x_a x_b) / (2 H1) ]
    with k the vacuum wavenumber.  Vanishing H1(z) (a focal plane of
    the medium) raises FocalPlaneError.
    """
    if z <= 0:
        raise InputDomainError("propagation distance must be positive")
    if rays is None:
        rays = solve_rays(medium, (0.0, z))
    h1 = float(rays.h1(z))
    if abs(h1) < 1e-12 * max(1.0, z):
        raise FocalPlaneError(f"ray height H1({z:g}) = {h1:.3g}: focal plane")
    h1p = float(rays.h1_slope(z))
    h2 = float(rays.h2(z))
    kn0 = medium.k_vacuum * medium.n0
    x_a = np.asarray(x_a, dtype=float)
    x_b = np.asarray(x_b, dtype=float)
    pref = np.sqrt(kn0 / (2j * np.pi * h1)) * np.exp(1j * kn0 * z)
    phase = kn0 * (h1p * x_b**2 + h2 * x_a**2 - 2.0 * x_a * x_b) / (2.0 * h1)
    out = pref * np.exp(1j * phase)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class EnvelopeSolution:
    """Width s(z), Gouy phase gamma(z) and slopes of the beam envelope."""
    s: Callable
    s_slope: Callable
    gamma: Callable
    gamma_rate: Callable
    z_a: float
    z_b: float
    invariant: float

    def phase_advance(self, z) -> float:
        return self.gamma(z) - self.gamma(self.z_a)

    def invariant_drift(self, n_probe: int = 65) -> float:
        """Max relative drift of s^2 gamma' from its initial value."""
        zs = np.linspace(self.z_a, self.z_b, n_probe)
        w = np.array([self.s(z) ** 2 * self.gamma_rate(z) for z in zs])
        return float(np.max(np.abs(w - self.invariant)) / abs(self.invariant))


def solve_envelope(medium: GrinMedium, z_span, init=None) -> EnvelopeSolution:
    """Integrate the complex envelope xi'' + g^2 xi = 0 with xi = s e^{i gamma}.

    The default initial condition xi = sqrt(n0/g), xi' = i g xi matches
    the stationary beam of the local profile and requires g(z_a) > 0;
    media defocusing at entry need an explicit init = (xi_0, xi_slope_0).
    The conserved Im(conj(xi) xi') keeps gamma strictly increasing.
    """
    z_a, z_b = float(z_span[0]), float(z_span[1])
    if not z_b > z_a:
        raise InputDomainError("z_span must increase")
    if init is None:
        g0 = float(medium.g_of(z_a))
        if g0 <= 0:
            raise InputDomainError("default envelope needs g(z_a) > 0; "
                                   "pass init=(xi_0, xi_slope_0) explicitly")
        xi0 = np.sqrt(medium.n0 / g0)
        xip0 = 1j * g0 * xi0
    else:
        xi0, xip0 = complex(init[0]), complex(init[1])
        if xi0 == 0:
            raise InputDomainError("envelope initial value must not vanish")
    invariant = float(np.imag(np.conj(xi0) * xip0))
    if invariant <= 0:
        raise InputDomainError("envelope needs Im(conj(xi) xi') > 0 at entry")

    #state: Re xi, Im xi, Re xi', Im xi', gamma
    def rhs(z, y):
        g2 = medium.g_of(z) ** 2
        xr, xi_, vr, vi, _ = y
        s2 = xr * xr + xi_ * xi_
        grate = (xr * vi - xi_ * vr) / s2
        return [vr, vi, -g2 * xr, -g2 * xi_, grate]

    y0 = [xi0.real, xi0.imag, xip0.real, xip0.imag, 0.0]
    sol = solve_ivp(rhs, (z_a, z_b), y0, **_ODE_OPTS)
    if not sol.success:
        raise InputDomainError(f"envelope integration failed: {sol.message}")
    f = sol.sol

    def s_of(z):
        y = f(z)
        return float(np.hypot(y[0], y[1]))

    def s_slope(z):
        y = f(z)
        return float((y[0] * y[2] + y[1] * y[3]) / np.hypot(y[0], y[1]))

    def gamma(z):
        return float(f(z)[4])

    def gamma_rate(z):
        y = f(z)
        return float((y[0] * y[3] - y[1] * y[2]) / (y[0] ** 2 + y[1] ** 2))

    return EnvelopeSolution(s=s_of, s_slope=s_slope, gamma=gamma,
                            gamma_rate=gamma_rate, z_a=z_a, z_b=z_b,
                            invariant=invariant)


def _weighted_hermite(y, n_max: int) -> np.ndarray:
    """Orthonormal h_n(y) = H_n(y) e^{-y^2/2} / sqrt(2^n n! sqrt(pi)), n <= n_max."""
    y = np.asarray(y, dtype=float)
    out = np.empty((n_max + 1,) + y.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * y * y)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * y * out[0]
    for n in range(1, n_max):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * y * out[n] - np.sqrt(n / (n + 1.0)) * out[n - 1]
    return out


def eigenmodes(x, z: float, medium: GrinMedium, env: EnvelopeSolution,
               n_max: int) -> np.ndarray:
    """Transverse eigenmode profiles psi_n(x, z) for n = 0 .. n_max.

    psi_n = sqrt(zeta) h_n(zeta x) e^{-i (n + 1/2) gamma(z)}
            exp[i n0 s'(z) x^2 / (2 lambdabar s(z))],
    zeta = sqrt(n0 gamma'(z) / lambdabar); rows are orthonormal in x.
    """
    if n_max < 0:
        raise InputDomainError("n_max must be >= 0")
    x = np.asarray(x, dtype=float)
    lam = medium.lambdabar
    zeta = np.sqrt(medium.n0 * env.gamma_rate(z) / lam)
    h = _weighted_hermite(zeta * x, n_max)
    chirp = np.exp(0.5j * medium.n0 * env.s_slope(z) * x * x / (lam * env.s(z)))
    phases = np.exp(-1j * (np.arange(n_max + 1) + 0.5) * env.gamma(z))
    return np.sqrt(zeta) * h * chirp[None, :] * phases[:, None]


def mode_kernel(x_a, x_b, z_a: float, z_b: float, medium: GrinMedium,
                n_max: int, env: EnvelopeSolution = None, on_tail: str = "warn"):
    """Propagator as a truncated eigenmode bilinear sum.

    K = e^{i k n0 (z_b - z_a)} sum_n psi_n*(x_a, z_a) psi_n(x_b, z_b),
    n = 0 .. n_max.  The sum converges as n_max grows but only at a
    slow conditional rate pointwise; the last-term tail estimate is
    checked against the partial sum and reported via ModeSumWarning
    (on_tail="warn") or raised (on_tail="raise").
    """
    if not z_b > z_a:
        raise InputDomainError("mode kernel needs z_b > z_a")
    if env is None:
        env = solve_envelope(medium, (z_a, z_b))
    x_a_arr = np.atleast_1d(np.asarray(x_a, dtype=float))
    x_b_arr = np.atleast_1d(np.asarray(x_b, dtype=float))
    m_a = eigenmodes(x_a_arr, z_a, medium, env, n_max)
    m_b = eigenmodes(x_b_arr, z_b, medium, env, n_max)
    terms = np.conj(m_a) * m_b  # requires matching shapes or scalar x_a
    carrier = np.exp(1j * medium.k_vacuum * medium.n0 * (z_b - z_a))
    total = carrier * terms.sum(axis=0)
    tail = float(np.max(np.abs(terms[-1]))) / max(float(np.max(np.abs(total))), 1e-300)
    if tail > _TAIL_RATIO:
        msg = (f"mode sum tail ratio {tail:.2e} above {_TAIL_RATIO:.0e} at "
               f"n_max = {n_max}; the truncated bilinear sum converges only "
               "slowly pointwise")
        if on_tail == "raise":
            raise BackendMismatchError(msg)
        warnings.warn(msg, ModeSumWarning)
    if np.ndim(x_a) == 0 and np.ndim(x_b) == 0:
        return complex(total[0])
    return total


def _kernel_matrix(x, dz: float, medium: GrinMedium) -> np.ndarray:
    rays = solve_rays(medium, (0.0, dz))
    return grin_kernel(x[None, :], x[:, None], dz, medium, rays)


def propagate_beam(field, x, z_a: float, z_b: float, medium: GrinMedium,
                   via: str = "modes", n_modes: int = 80,
                   verify: bool = False, verify_tol: float = 1e-4) -> np.ndarray:
    """Propagate a transverse field sampled on a uniform grid x.

    via="kernel" applies the ray-pair propagator by quadrature over the
    grid, splitting the interval when it lands on a focal plane;
    via="modes" projects on n_modes + 1 eigenmodes and rephases them.
    With verify=True both backends run and a maximum pointwise
    disagreement above verify_tol (relative to the peak amplitude)
    raises BackendMismatchError.
    """
    x = np.asarray(x, dtype=float)
    field = np.asarray(field, dtype=complex)
    if x.ndim != 1 or field.shape != x.shape:
        raise InputDomainError("field and grid must be matching 1d arrays")
    if not z_b > z_a:
        raise InputDomainError("propagation needs z_b > z_a")
    if via not in ("kernel", "modes"):
        raise InputDomainError("via must be 'kernel' or 'modes'")
    gmax = float(np.max(np.abs(medium.g_of(np.linspace(z_a, z_b, 33)))))
    if gmax * float(np.max(np.abs(x))) > 0.5:
        warnings.warn("g * x_max exceeds 0.5: weak-inhomogeneity assumption "
                      "is strained on this grid", ParaxialityWarning)
    dx = x[1] - x[0]

    def via_kernel() -> np.ndarray:
        out = field.copy()
        pending = [(z_a, z_b)]
        done = []
        while pending:
            if len(done) + len(pending) > 64:
                raise FocalPlaneError("could not split the interval away from "
                                      "focal planes; g varies too rapidly")
            lo, hi = pending.pop()
            rays = solve_rays(medium, (lo, hi))
            if abs(float(rays.h1(hi))) < 1e-6 * max(1.0, hi - lo):
                mid = 0.5 * (lo + hi)
                pending.extend([(mid, hi), (lo, mid)])
                continue
            done.append((lo, hi))
        for lo, hi in sorted(done):
            shifted = GrinMedium(medium.n0, (lambda z, lo=lo: medium.g_of(z + lo))
                                 if callable(medium.g) else medium.g, medium.wavelength)
            out = dx * (_kernel_matrix(x, hi - lo, shifted) @ out)
        return out

    def via_modes() -> np.ndarray:
        env = solve_envelope(medium, (z_a, z_b))
        basis_a = eigenmodes(x, z_a, medium, env, n_modes)
        coeff = dx * (np.conj(basis_a) @ field)
        cmax = float(np.max(np.abs(coeff)))
        if cmax > 0 and abs(coeff[-1]) > 1e-6 * cmax:
            warnings.warn(f"field is under-resolved by {n_modes + 1} modes: "
                          f"|c_last|/|c|_max = {abs(coeff[-1]) / cmax:.2e}",
                          ModeSumWarning)
        basis_b = eigenmodes(x, z_b, medium, env, n_modes)
        carrier = np.exp(1j * medium.k_vacuum * medium.n0 * (z_b - z_a))
        return carrier * (coeff @ basis_b)

    if verify:
        a = via_kernel()
        b = via_modes()
        scale = max(float(np.max(np.abs(a))), 1e-300)
        diff = float(np.max(np.abs(a - b))) / scale
        if diff > verify_tol:
            raise BackendMismatchError(
                f"kernel and mode backends disagree: {diff:.3e} > {verify_tol:g}")
        return a if via == "kernel" else b
    return via_kernel() if via == "kernel" else via_modes()
