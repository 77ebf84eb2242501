"""Closed-form one-dimensional propagators and geometric-optics helpers.

Conventions: K(x_b, t_b; x_a, t_a) propagates amplitudes forward in
time (t_b > t_a), hbar and the mass are carried explicitly, and every
complex square root is taken on the principal branch, so the free
propagator carries the usual exp(-i pi/4) prefactor phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CausticError, InputDomainError, TotalInternalReflectionError

#Relative threshold below which sin(w T) counts as a caustic
_CAUSTIC_RTOL = 1e-12


@dataclass(frozen=True)
class ParticleParams:
    """Mass and hbar for a point particle on a line."""
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.mass <= 0:
            raise InputDomainError("mass must be positive")
        if self.hbar <= 0:
            raise InputDomainError("hbar must be positive")


@dataclass(frozen=True)
class OscillatorParams:
    """Harmonic oscillator: mass, hbar and angular frequency."""
    mass: float = 1.0
    hbar: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if self.mass <= 0 or self.hbar <= 0:
            raise InputDomainError("mass and hbar must be positive")
        if self.omega < 0:
            raise InputDomainError("omega must be >= 0")

    @property
    def particle(self) -> ParticleParams:
        return ParticleParams(self.mass, self.hbar)


@dataclass(frozen=True)
class SpacetimeEndpoints:
    """Fixed endpoints (x_a, t_a) -> (x_b, t_b) of a propagation step."""
    x_a: float
    x_b: float
    t_a: float = 0.0
    t_b: float = 1.0

    def __post_init__(self):
        if not (self.t_b > self.t_a):
            raise InputDomainError("endpoints need t_b > t_a")

    @property
    def duration(self) -> float:
        return self.t_b - self.t_a

    @property
    def dx(self) -> float:
        return self.x_b - self.x_a


def slice_amplitude(eps: float, p: ParticleParams = ParticleParams()) -> complex:
    """Normalization A(eps) = sqrt(2 pi i hbar eps / m) dividing each slice."""
    if eps <= 0:
        raise InputDomainError("slice duration must be positive")
    return np.sqrt(2j * np.pi * p.hbar * eps / p.mass)


def free_action(ends: SpacetimeEndpoints, p: ParticleParams = ParticleParams()) -> float:
    """Classical action m (x_b - x_a)^2 / (2 T) of the straight-line path."""
    return 0.5 * p.mass * ends.dx**2 / ends.duration


def free_kernel(ends: SpacetimeEndpoints, p: ParticleParams = ParticleParams()) -> complex:
    """Free-particle propagator sqrt(m / (2 pi i hbar T)) exp(i m dx^2 / (2 hbar T))."""
    T = ends.duration
    pref = np.sqrt(p.mass / (2j * np.pi * p.hbar * T))
    return complex(pref * np.exp(1j * free_action(ends, p) / p.hbar))


def ho_action(ends: SpacetimeEndpoints, osc: OscillatorParams = OscillatorParams()) -> float:
    """Classical oscillator action between fixed endpoints.

    S = m w / (2 sin(w T)) * [(x_a^2 + x_b^2) cos(w T) - 2 x_a x_b];
    the w -> 0 limit reduces to the free straight-line action.
    """
    if osc.omega == 0.0:
        return free_action(ends, osc.particle)
    T = ends.duration
    wT = osc.omega * T
    s = math.sin(wT)
    if abs(s) <= _CAUSTIC_RTOL * max(1.0, abs(wT)):
        raise CausticError(f"classical action undefined at w*T = {wT:.6g} (focal time)")
    c = math.cos(wT)
    return (0.5 * osc.mass * osc.omega / s) * ((ends.x_a**2 + ends.x_b**2) * c
                                               - 2.0 * ends.x_a * ends.x_b)


def ho_kernel(ends: SpacetimeEndpoints, osc: OscillatorParams = OscillatorParams()) -> complex:
    """Harmonic oscillator propagator.

    K = sqrt(m / (2 pi i hbar T sinc(w T))) * exp(i S_cl / hbar) with
    sinc(u) = sin(u)/u, so the prefactor degrades continuously to the
    free one as w -> 0; at w = 0 exactly, the free kernel is returned
    bit for bit.  Focal times w T = n pi raise CausticError.
    """
    if osc.omega == 0.0:
        return free_kernel(ends, osc.particle)
    T = ends.duration
    wT = osc.omega * T
    s = math.sin(wT)
    if abs(s) <= _CAUSTIC_RTOL * max(1.0, abs(wT)):
        raise CausticError(f"propagator singular at w*T = {wT:.6g} (focal time)")
    s_action = ho_action(ends, osc)
    #T * sinc(w T) = sin(w T) / w
    pref = np.sqrt(osc.mass / (2j * np.pi * osc.hbar * (s / osc.omega)))
    return complex(pref * np.exp(1j * s_action / osc.hbar))


def snell_refract(n_a: float, n_b: float, theta_a: float) -> float:
    """Refracted angle from n_a sin(theta_a) = n_b sin(theta_b).

    Angles are measured from the interface normal, in radians.
    Raises TotalInternalReflectionError when no real angle exists.
    """
    if n_a <= 0 or n_b <= 0:
        raise InputDomainError("refractive indices must be positive")
    if not (0.0 <= theta_a < 0.5 * math.pi):
        raise InputDomainError("incidence angle must lie in [0, pi/2)")
    s = n_a * math.sin(theta_a) / n_b
    if s > 1.0:
        raise TotalInternalReflectionError(
            f"n_a sin(theta_a)/n_b = {s:.6g} > 1: totally internally reflected")
    return math.asin(s)


def refraction_action(x_a: float, x_c: float, x_b: float, t_c: float, T: float,
                      p: ParticleParams = ParticleParams()) -> float:
    """Two-segment kinetic action through a bend point x_c at time t_c.

    S = m/2 [v_b (x_b - x_c) + v_a (x_c - x_a)] with segment speeds
    v_a = (x_c - x_a)/t_c and v_b = (x_b - x_c)/(T - t_c).
    """
    if not (0.0 < t_c < T):
        raise InputDomainError("bend time must lie strictly inside (0, T)")
    v_a = (x_c - x_a) / t_c
    v_b = (x_b - x_c) / (T - t_c)
    return 0.5 * p.mass * (v_b * (x_b - x_c) + v_a * (x_c - x_a))


def quadratic_prefactor_check(kernel_values, actions, hbar: float = 1.0) -> float:
    """Max relative spread of K * exp(-i S / hbar) over endpoint samples.

    For a quadratic system the propagator factorizes into a common
    endpoint-independent prefactor times exp(i S_cl / hbar); feeding in
    matched (K, S_cl) samples, the ratio must be constant.  Returns the
    maximum relative deviation from the mean ratio (0 means perfect
    factorization).
    """
    k = np.asarray(kernel_values, dtype=complex).ravel()
    s = np.asarray(actions, dtype=float).ravel()
    if k.size != s.size or k.size < 2:
        raise InputDomainError("need >= 2 matched kernel and action samples")
    ratios = k * np.exp(-1j * s / hbar)
    mean = ratios.mean()
    if mean == 0:
        raise InputDomainError("degenerate samples: mean prefactor vanished")
    return float(np.max(np.abs(ratios - mean)) / abs(mean))
