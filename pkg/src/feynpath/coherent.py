"""Coherent-state propagators for driven quadratic bosonic Hamiltonians.

H(t) = w(t) a+a + conj(f)(t) a+a+ + f(t) a a + conj(g)(t) a+ + g(t) a:
the stored coefficients f and g multiply the lowering terms, their
conjugates the raising ones (so the degenerate amplifier's raising
pair rotates as e^{-2iwt}, resonant with the mode).  The
normal-ordered propagator between coherent-state labels is fixed by
three auxiliary functions: a Riccati variable X, a linearized factor
Y and a drive response Z, plus an action-like integral that is
quadratic in the incoming label.  One augmented ODE solve provides
everything for all label pairs over a time interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .errors import InputDomainError, QuadratureError, RiccatiBlowupError

_BLOWUP = 1e6


def _as_time_function(value) -> Callable:
    if callable(value):
        return value
    if isinstance(value, tuple) and len(value) == 2:
        t, v = np.asarray(value[0], float), np.asarray(value[1])
        if np.iscomplexobj(v):
            re, im = CubicSpline(t, v.real), CubicSpline(t, v.imag)
            return lambda tt: re(tt) + 1j * im(tt)
        spl = CubicSpline(t, v)
        return lambda tt: spl(tt)
    const = complex(value)
    return lambda tt: const


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """Time-dependent coefficients w(t), f(t), g(t).

    Each coefficient may be a constant, a callable of t, or a pair of
    arrays (t_samples, values) that is spline-interpolated.
    """
    omega: object = 1.0
    f: object = 0.0
    g: object = 0.0

    def omega_of(self, t):
        return _as_time_function(self.omega)(t)

    def f_of(self, t):
        return _as_time_function(self.f)(t)

    def g_of(self, t):
        return _as_time_function(self.g)(t)

    @classmethod
    def degenerate_amplifier(cls, omega: float, kappa: float) -> "QuadraticHamiltonian":
        """Two-photon pump resonant with the mode.

        The lowering-pair coefficient is f(t) = kappa e^{2 i w t}, so the
        raising pair carries e^{-2 i w t} and co-rotates with a+a+.
        """
        return cls(omega=omega, f=lambda t: kappa * np.exp(2j * omega * t), g=0.0)


@dataclass(frozen=True)
class CoherentLabel:
    alpha: complex
    t: float


class XYZSolution:
    """Dense-output auxiliary functions over [t_a, t_b].

    X solves the Riccati equation X' = -2i w X - 4i f X^2 - i conj(f)
    from X(t_a) = 0; Y' = -i (w + 4 f X) Y from Y(t_a) = 1; and
    Z' = -i (w + 4 f X) Z - i conj(g) (1 + 2 X) from Z(t_a) = 0.
    The accumulated integrals c0, c1, c2 give the action-like term
    Sigma(alpha_a) = c0 + c1 alpha_a + c2 alpha_a^2.
    """

    def __init__(self, H: QuadraticHamiltonian, t_a: float, t_b: float, sol):
        self.H = H
        self.t_a = t_a
        self.t_b = t_b
        self._sol = sol

    def _state(self, t):
        y = self._sol(t)
        return (y[0] + 1j * y[1], y[2] + 1j * y[3], y[4] + 1j * y[5],
                y[6] + 1j * y[7], y[8] + 1j * y[9], y[10] + 1j * y[11])

    def X(self, t) -> complex:
        return self._state(t)[0]

    def Y(self, t) -> complex:
        return self._state(t)[1]

    def Z(self, t) -> complex:
        return self._state(t)[2]

    def sigma_coefficients(self, t=None):
        t = self.t_b if t is None else t
        st = self._state(t)
        return st[3], st[4], st[5]

    def sigma(self, alpha_a: complex, t=None) -> complex:
        c0, c1, c2 = self.sigma_coefficients(t)
        return c0 + c1 * alpha_a + c2 * alpha_a * alpha_a

    def riccati_residual(self, n_probe: int = 33) -> float:
        """Max |X' - rhs| via finite differences, a consistency check."""
        ts = np.linspace(self.t_a, self.t_b, n_probe)
        h = 1e-6 * max(self.t_b - self.t_a, 1.0)
        worst = 0.0
        for t in ts[1:-1]:
            xp = (self.X(t + h) - self.X(t - h)) / (2.0 * h)
            x = self.X(t)
            rhs = (-2j * self.H.omega_of(t) * x - 4j * self.H.f_of(t) * x * x
                   - 1j * np.conj(self.H.f_of(t)))
            worst = max(worst, abs(xp - rhs))
        return worst


def solve_xyz(H: QuadraticHamiltonian, t_a: float, t_b: float,
              rtol: float = 1e-11, atol: float = 1e-12) -> XYZSolution:
    """Integrate the auxiliary system and the action accumulators.

    A Riccati variable crossing |X| = 1e6 aborts the solve and raises
    RiccatiBlowupError carrying the blow-up time.
    """
    if not t_b > t_a:
        raise InputDomainError("need t_b > t_a")

    def rhs(t, y):
        X = y[0] + 1j * y[1]
        Y = y[2] + 1j * y[3]
        Z = y[4] + 1j * y[5]
        w = H.omega_of(t)
        f = H.f_of(t)
        g = H.g_of(t)
        dX = -2j * w * X - 4j * f * X * X - 1j * np.conj(f)
        lam = -1j * (w + 4.0 * f * X)
        dY = lam * Y
        dZ = lam * Z - 1j * np.conj(g) * (1.0 + 2.0 * X)
        dc0 = f * (2.0 * X + Z * Z) + g * Z
        dc1 = 2.0 * f * Y * Z + g * Y
        dc2 = f * Y * Y
        out = np.empty(12)
        for i, d in enumerate((dX, dY, dZ, dc0, dc1, dc2)):
            out[2 * i] = d.real
            out[2 * i + 1] = d.imag
        return out

    def blowup(t, y):
        return y[0] * y[0] + y[1] * y[1] - _BLOWUP**2
    blowup.terminal = True
    blowup.direction = 1

    y0 = np.zeros(12)
    y0[2] = 1.0  # Y(t_a) = 1
    sol = solve_ivp(rhs, (t_a, t_b), y0, rtol=rtol, atol=atol,
                    dense_output=True, method="DOP853", events=blowup)
    if sol.t_events[0].size:
        raise RiccatiBlowupError(float(sol.t_events[0][0]))
    if not sol.success:
        raise InputDomainError(f"auxiliary integration failed: {sol.message}")
    return XYZSolution(H, t_a, t_b, sol.sol)


def quadratic_propagator(alpha_a, alpha_b, H: QuadraticHamiltonian,
                         xyz: XYZSolution) -> complex:
    """Coherent-state propagator K(alpha_b, t_b; alpha_a, t_a).

    K = exp[ -(|alpha_b|^2 + |alpha_a|^2)/2 + Y conj(alpha_b) alpha_a
             + X conj(alpha_b)^2 + Z conj(alpha_b) ] * exp(-i Sigma),
    all auxiliaries evaluated at t_b.  Labels broadcast as arrays.
    """
    a = np.asarray(alpha_a, dtype=complex)
    b = np.asarray(alpha_b, dtype=complex)
    X = xyz.X(xyz.t_b)
    Y = xyz.Y(xyz.t_b)
    Z = xyz.Z(xyz.t_b)
    bc = np.conj(b)
    F = np.exp(-0.5 * (np.abs(b) ** 2 + np.abs(a) ** 2)
               + Y * bc * a + X * bc * bc + Z * bc)
    out = F * np.exp(-1j * xyz.sigma(a))
    return complex(out) if out.ndim == 0 else out


def dpa_propagator(alpha_a, alpha_b, t_a: float, t_b: float,
                   omega: float, kappa: float) -> complex:
    """Closed-form propagator of the resonantly pumped amplifier.

    With f(t) = kappa e^{2 i w t} and no linear drive, the auxiliaries
    reduce to X = e^{-2 i w t_b} tanh(2 kappa dt) / (2i),
    Y = e^{-i w dt} sech(2 kappa dt), Z = 0, and the action integral
    contributes sqrt(sech) and a tanh squeezing term in alpha_a.
    """
    if not t_b > t_a:
        raise InputDomainError("need t_b > t_a")
    a = np.asarray(alpha_a, dtype=complex)
    b = np.asarray(alpha_b, dtype=complex)
    dt = t_b - t_a
    u = 2.0 * kappa * dt
    sech = 1.0 / math.cosh(u)
    tanh = math.tanh(u)
    bc = np.conj(b)
    expo = (-0.5 * (np.abs(b) ** 2 + np.abs(a) ** 2)
            + bc * a * np.exp(-1j * omega * dt) * sech
            + bc * bc * np.exp(-2j * omega * t_b) * tanh / 2j
            - 0.5j * a * a * np.exp(2j * omega * t_a) * tanh)
    out = math.sqrt(sech) * np.exp(expo)
    return complex(out) if out.ndim == 0 else out


def compose_propagators_mc(prop_late, prop_early, n_samples: int, seed: int):
    """Monte Carlo resolution-of-identity glue between two propagators.

    Estimates (1/pi) int d^2 z prop_late(z) prop_early(z) by sampling
    z from the Gaussian e^{-|z|^2}/pi, which cancels the coherent-state
    overlap decay of the integrand.  Returns (estimate, stderr).
    """
    if n_samples < 2:
        raise InputDomainError("need at least two samples")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal(n_samples) + 1j * rng.standard_normal(n_samples)) / np.sqrt(2.0)
    vals = prop_late(z) * prop_early(z) * np.exp(np.abs(z) ** 2)
    est = complex(vals.mean())
    var = vals.real.var(ddof=1) + vals.imag.var(ddof=1)
    return est, float(np.sqrt(var / n_samples))


def expectation_annihilation(mixture, propagator, t: float,
                             order: int = 120, scale: float = None) -> complex:
    """Heisenberg-picture <a(t)> for an initial coherent mixture.

    mixture is a sequence of (weight, alpha_0) point masses with
    non-negative weights summing to one.  For each component,
    <a(t)> = (1/pi) int d^2 beta  beta |K(beta, t; alpha_0, 0)|^2
    is evaluated by scaled Gauss-Hermite product quadrature; the scale
    is probed from the decay of |K| unless given.  Disagreement between
    two quadrature refinements raises QuadratureError.
    """
    if t <= 0:
        raise InputDomainError("need t > 0")
    comps = [(float(w), complex(a)) for w, a in mixture]
    if not comps or any(w < 0 for w, _ in comps):
        raise InputDomainError("mixture weights must be non-negative")
    wsum = sum(w for w, _ in comps)
    if abs(wsum - 1.0) > 1e-9:
        raise InputDomainError("mixture weights must sum to one")

    total = 0.0 + 0.0j
    for w, alpha0 in comps:
        def density(beta):
            k = propagator(beta, t, alpha0, 0.0)
            return np.abs(k) ** 2

        if scale is None:
            #probe the radial decay of |K|^2 to size the quadrature
            angles = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 24, endpoint=False))
            r_cut = 1.0
            peak = max(float(np.max(density(r * angles))) for r in (0.0, 0.5, 1.0))
            for r in np.geomspace(1.0, 400.0, 60):
                if float(np.max(density(r * angles))) * max(r, 1.0) > 1e-18 * peak:
                    r_cut = r
            s = max(r_cut / 11.0, 0.5)
        else:
            s = float(scale)

        def gh_value(n, s):
            y, wts = np.polynomial.hermite.hermgauss(n)
            u = s * y
            U, V = np.meshgrid(u, u, indexing="ij")
            beta = U + 1j * V
            f = beta * density(beta)
            env = np.exp(y * y)
            return s * s * np.einsum("i,j,ij->", wts * env, wts * env, f) / np.pi

        v1 = gh_value(order, s)
        v2 = gh_value(order + 40, s * 1.15)
        if abs(v1 - v2) > 1e-8 * (1.0 + abs(v2)):
            raise QuadratureError(
                f"label quadrature did not converge: |{v1:.6g} - {v2:.6g}|")
        total += w * v2
    return complex(total)
