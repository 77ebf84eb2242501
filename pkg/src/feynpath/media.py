"""Field propagation and emission in lossy one-dimensional media.

Everything is driven by a complex wavenumber kappa(w) = k(w) + i g(w)
with g >= 0 (passive absorption).  The outgoing Green function,
parametric pair production in a pumped slab of length L, and emitter
decay renormalized by a local dielectric are covered, together with
the effective dielectric function of an oscillator reservoir model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (EvanescentModeError, InputDomainError, ResonancePoleError)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class DispersiveMedium1D:
    """Slab on [0, L] described by kappa(w); detectors sit at x >= L.

    kappa maps angular frequency to the complex wavenumber; its
    imaginary part must be >= 0 at the pump, signal and idler
    frequencies (passivity).
    """
    kappa: Callable
    length: float
    omega_pump: float
    omega_signal: float
    omega_idler: float

    def __post_init__(self):
        if self.length <= 0:
            raise InputDomainError("slab length must be positive")
        for w in (self.omega_pump, self.omega_signal, self.omega_idler):
            if np.imag(complex(self.kappa(w))) < 0:
                raise InputDomainError("Im kappa < 0: medium would amplify")

    @classmethod
    def from_constants(cls, k_signal: float, k_idler: float, delta_k: float,
                       big_gamma: float, length: float,
                       omega_pump: float = 2.0, omega_signal: float = 0.9,
                       omega_idler: float = 1.1) -> "DispersiveMedium1D":
        """Three-frequency medium with prescribed mismatch and loss.

        delta_k = k_p - k_s - k_i and big_gamma = g_s + g_i; the loss is
        split evenly between signal and idler, the pump stays lossless.
        Coinciding frequencies must carry identical wavenumbers, since
        kappa is a single-valued function of frequency.
        """
        if big_gamma < 0:
            raise InputDomainError("total loss rate must be >= 0")
        table = {}
        for w, value in ((omega_pump, (k_signal + k_idler + delta_k) + 0.0j),
                         (omega_signal, k_signal + 0.5j * big_gamma),
                         (omega_idler, k_idler + 0.5j * big_gamma)):
            if w in table and table[w] != value:
                raise InputDomainError(
                    f"frequency {w:g} is assigned two different wavenumbers; "
                    "separate the signal and idler frequencies")
            table[w] = value

        def kap(w):
            try:
                return table[w]
            except KeyError:
                raise InputDomainError(f"medium tabulated only at {sorted(table)}")
        return cls(kap, length, omega_pump, omega_signal, omega_idler)

    @property
    def delta_k(self) -> float:
        return float(np.real(complex(self.kappa(self.omega_pump))
                             - complex(self.kappa(self.omega_signal))
                             - complex(self.kappa(self.omega_idler))))

    @property
    def big_gamma(self) -> float:
        return float(np.imag(complex(self.kappa(self.omega_signal))
                             + complex(self.kappa(self.omega_idler))))


def green_1d(x, y, omega: float, medium: DispersiveMedium1D):
    """Outgoing Green function e^{i kappa |x - y|} / (2 i kappa)."""
    kap = complex(medium.kappa(omega))
    if kap == 0:
        raise EvanescentModeError("kappa(omega) = 0: no propagating channel")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.exp(1j * kap * np.abs(x - y)) / (2j * kap)
    return complex(out) if out.ndim == 0 else out


def _expm1_over(w):
    """(e^w - 1)/w, series below |w| = 1e-3 so small losses stay smooth."""
    w = np.asarray(w, dtype=complex)
    out = np.empty_like(w)
    small = np.abs(w) < 1e-3
    ws = w[small]
    out[small] = 1.0 + ws / 2.0 + ws**2 / 6.0 + ws**3 / 24.0 + ws**4 / 120.0 \
        + ws**5 / 720.0 + ws**6 / 5040.0
    wl = w[~small]
    out[~small] = (np.exp(wl) - 1.0) / wl
    return out


def spdc_probability(delta_k, big_gamma, length: float):
    """Normalized pair-production probability of the pumped lossy slab.

    P = |e^{-Gamma L} (e^{w} - 1)/w|^2 with w = (i delta_k + Gamma) L,
    equal to the textbook
    -2 e^{-G L} [cos(dk L) - cosh(G L)] / (L^2 (dk^2 + G^2))
    but free of overflow and cancellation; the lossless limit is the
    sinc^2 phase-matching curve, P(0, 0) = 1.
    """
    if length <= 0:
        raise InputDomainError("slab length must be positive")
    dk = np.asarray(delta_k, dtype=float)
    gm = np.asarray(big_gamma, dtype=float)
    if np.any(gm < 0):
        raise InputDomainError("loss rate must be >= 0")
    w = (1j * dk + gm) * length
    val = np.abs(np.exp(-gm * length) * _expm1_over(w)) ** 2
    return float(val) if val.ndim == 0 else val


def biphoton_amplitude(x: float, y: float, medium: DispersiveMedium1D,
                       pump_amplitude: complex = 1.0, chi: complex = 1.0,
                       points_per_cycle: float = 8.0) -> complex:
    """Vertex integral for one emitted pair observed at x and y >= L.

    X(x, y) = chi A_p int_0^L e^{i k_p z} G(x - z, w_s) G(z - y, w_i) dz
    by composite Gauss-Legendre panels resolving every oscillation of
    the integrand.
    """
    L = medium.length
    if x < L or y < L:
        raise InputDomainError("detectors must sit at or beyond the slab exit")
    k_p = complex(medium.kappa(medium.omega_pump))
    k_s = complex(medium.kappa(medium.omega_signal))
    k_i = complex(medium.kappa(medium.omega_idler))
    if k_s == 0 or k_i == 0:
        raise EvanescentModeError("kappa = 0 at signal or idler frequency")

    cycles = (abs(k_p) + abs(k_s) + abs(k_i)) * L / (2.0 * np.pi)
    n_panels = max(8, int(points_per_cycle * cycles / 16.0) + 1)
    edges = np.linspace(0.0, L, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    z = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    ww = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    #x - z and y - z are non-negative inside the slab
    integrand = (np.exp(1j * k_p * z)
                 * np.exp(1j * k_s * (x - z)) / (2j * k_s)
                 * np.exp(1j * k_i * (y - z)) / (2j * k_i))
    return complex(chi * pump_amplitude * np.sum(ww * integrand))


def pair_probability_numeric(medium: DispersiveMedium1D,
                             pump_amplitude: complex = 1.0,
                             chi: complex = 1.0, x: float = None,
                             y: float = None) -> float:
    """Pair-detection probability from the vertex quadrature.

    |X(x, y)|^2 is normalized by |chi A_p / (4 kappa_s kappa_i)|^2 L^2,
    the modulus of the medium's own vertex prefactor, so at the slab
    exit the value matches spdc_probability(delta_k, Gamma, L).  Beyond
    the exit the free decay e^{-2 g_s (x - L) - 2 g_i (y - L)} remains.
    """
    L = medium.length
    x = L if x is None else x
    y = L if y is None else y
    amp = biphoton_amplitude(x, y, medium, pump_amplitude, chi)
    k_s = complex(medium.kappa(medium.omega_signal))
    k_i = complex(medium.kappa(medium.omega_idler))
    norm = abs(chi * pump_amplitude / (4.0 * k_s * k_i)) * L
    return float(abs(amp) ** 2 / norm**2)


@dataclass(frozen=True)
class EmitterEnvironment:
    """Emitter of bare rate gamma0 at frequency omega0 inside a lossy
    local dielectric eps = eps1 + i eps2."""
    eps1: float
    eps2: float
    gamma0: float
    omega0: float

    def __post_init__(self):
        if self.gamma0 <= 0 or self.omega0 <= 0:
            raise InputDomainError("gamma0 and omega0 must be positive")
        if self.eps2 < 0:
            raise InputDomainError("Im eps must be >= 0 (passive medium)")


def spontaneous_rate(env: EmitterEnvironment) -> float:
    """Emission rate Gamma = gamma0 Re sqrt(eps1 + i eps2)."""
    return env.gamma0 * float(np.real(np.sqrt(env.eps1 + 1j * env.eps2)))


def imag_green_loop(env: EmitterEnvironment) -> float:
    """Equal-point Im G_zz = (omega0 / 4 pi) Re sqrt(eps1 + i eps2).

    This is the closed form of the transverse k-space loop integral
    (1/2 pi^2) int_0^inf dk k^2 w0^2 eps2 / [(k^2 - w0^2 eps1)^2
    + (w0^2 eps2)^2] continued to the lossless limit.
    """
    return (env.omega0 / (4.0 * np.pi)) * float(np.real(np.sqrt(env.eps1 + 1j * env.eps2)))


@dataclass(frozen=True)
class EffectiveDielectricModel:
    """Single-resonance reservoir model of the dielectric response.

    The polarization response Gamma(W) = eps0 w0^2 beta /
    (w0^2 - W^2 [1 + lambda_feedback(W)]) enters as
    eps(W) = 1 + coupling * Gamma(W) / eps0 with coupling g in {0, 1}
    switching the matter-field interaction off or on.
    """
    omega0: float
    beta: float
    coupling: int = 1
    eps0: float = 1.0
    lambda_feedback: Callable = field(default=None)

    def __post_init__(self):
        if self.omega0 <= 0:
            raise InputDomainError("resonance frequency must be positive")
        if self.coupling not in (0, 1):
            raise InputDomainError("coupling switch must be 0 or 1")
        if self.eps0 <= 0:
            raise InputDomainError("eps0 must be positive")


def lorentz_feedback(damping: float) -> Callable:
    """Reservoir feedback i damping / W turning the resonance Lorentzian.

    Substituted into the response denominator it yields the familiar
    w0^2 - W^2 - i damping W; the W = 0 value is irrelevant because the
    feedback always appears multiplied by W^2.
    """
    def lam(W):
        W = np.asarray(W, dtype=float)
        out = np.zeros_like(W, dtype=complex)
        np.divide(1j * damping, W, out=out, where=(W != 0))
        return out if out.ndim else complex(out)
    return lam


def polarization_response(W, model: EffectiveDielectricModel):
    """Reservoir-dressed response Gamma(W); poles raise ResonancePoleError."""
    W = np.asarray(W, dtype=float)
    lam = model.lambda_feedback(W) if model.lambda_feedback is not None else 0.0
    denom = model.omega0**2 - W**2 * (1.0 + lam)
    scale = model.omega0**2
    if np.any(np.abs(denom) < 1e-12 * scale):
        raise ResonancePoleError("response evaluated on an undamped resonance pole")
    out = model.eps0 * model.omega0**2 * model.beta / denom
    return complex(out) if out.ndim == 0 else out


def effective_dielectric(W, model: EffectiveDielectricModel):
    """eps(W) = 1 + g Gamma(W) / eps0; the static limit is 1 + g beta."""
    out = 1.0 + model.coupling * polarization_response(W, model) / model.eps0
    return complex(out) if np.ndim(out) == 0 else out
