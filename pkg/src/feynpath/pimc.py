"""Thermal ring-polymer Monte Carlo in one dimension (hbar = k_B = 1).

The primitive discretized action over M beads at inverse temperature
beta uses dtau = beta / M,

    S = sum_k [ m (x_{k+1} - x_k)^2 / (2 dtau) + dtau V(x_k) ]

with cyclic indexing.  Sampling combines vectorized single-bead
Gaussian displacements (checkerboard over even/odd beads) with staging
segment rebuilds that draw the kinetic part of a segment exactly from
the free-particle bridge, so only the potential enters the accept
step.  Errors come from blocking analysis; means carry integrated
autocorrelation estimates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (AcceptanceRateWarning, FieldTooLargeError, InputDomainError,
                     ToleranceError)
from .potentials import PotentialModel

OBSERVABLES = ("potential_energy", "total_energy_virial", "mean_position", "mean_square")


@dataclass(frozen=True)
class ThermalSystem:
    """Particle of given mass in a potential at temperature T, k_B = 1.

    An optional uniform field couples as -charge * field * x on top of
    the base potential.
    """
    mass: float
    potential: PotentialModel
    temperature: float
    charge: float = 0.0
    field: float = 0.0

    def __post_init__(self):
        if self.mass <= 0:
            raise InputDomainError("mass must be positive")
        if self.temperature <= 0:
            raise InputDomainError("temperature must be positive")

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature

    def v(self, x):
        return self.potential(x) - self.charge * self.field * x

    def v_slope(self, x):
        return self.potential.derivative(x) - self.charge * self.field

    def with_field(self, value: float) -> "ThermalSystem":
        return ThermalSystem(self.mass, self.potential, self.temperature,
                             self.charge, value)


@dataclass
class RingPolymer:
    beads: np.ndarray
    beta: float

    def __post_init__(self):
        self.beads = np.asarray(self.beads, dtype=float)
        if self.beads.ndim != 1 or self.beads.size < 2:
            raise InputDomainError("ring polymer needs >= 2 beads")
        if self.beta <= 0:
            raise InputDomainError("beta must be positive")

    @property
    def n_beads(self) -> int:
        return self.beads.size

    @property
    def dtau(self) -> float:
        return self.beta / self.beads.size


def primitive_action(poly: RingPolymer, sys: ThermalSystem) -> float:
    """Discretized Euclidean action of the closed bead chain."""
    x = poly.beads
    dtau = poly.dtau
    dxs = np.roll(x, -1) - x
    return float(np.sum(0.5 * sys.mass * dxs**2 / dtau + dtau * sys.v(x)))


def acceptance_probability(delta_s: float) -> float:
    """Metropolis rule min(1, e^{-dS}), shared with the enumerable oracle."""
    return min(1.0, float(np.exp(-min(delta_s, 700.0))))


def _single_bead_pass(x, sys: ThermalSystem, dtau: float, rng, width: float) -> int:
    """Checkerboard Gaussian displacement of every bead; returns accepts."""
    m_over = sys.mass / (2.0 * dtau)
    n = x.size
    accepted = 0
    for parity in (0, 1):
        idx = np.arange(parity, n, 2)
        old = x[idx]
        new = old + width * rng.standard_normal(idx.size)
        left = x[(idx - 1) % n]
        right = x[(idx + 1) % n]
        ds = (m_over * ((new - left) ** 2 + (right - new) ** 2
                        - (old - left) ** 2 - (right - old) ** 2)
              + dtau * (sys.v(new) - sys.v(old)))
        ok = rng.random(idx.size) < np.exp(-np.minimum(ds, 700.0))
        x[idx[ok]] = new[ok]
        accepted += int(ok.sum())
    return accepted


def _staging_pass(x, sys: ThermalSystem, dtau: float, rng, seg_len: int) -> int:
    """Rebuild one random segment from the exact free bridge.

    Interior beads are drawn from the conditional Gaussian of the
    kinetic action, so the accept step sees only the potential change.
    """
    n = x.size
    start = int(rng.integers(n))
    idx = [(start + j) % n for j in range(1, seg_len + 1)]
    x_right = x[(start + seg_len + 1) % n]
    old = x[idx].copy()
    cur = x[start]
    new = np.empty(seg_len)
    for j in range(seg_len):
        rem = seg_len - j
        mean = (rem * cur + x_right) / (rem + 1.0)
        var = (rem / (rem + 1.0)) * dtau / sys.mass
        cur = mean + np.sqrt(var) * rng.standard_normal()
        new[j] = cur
    dv = dtau * float(np.sum(sys.v(new) - sys.v(old)))
    if rng.random() < np.exp(-min(dv, 700.0)):
        x[idx] = new
        return 1
    return 0


def metropolis_sweep(poly: RingPolymer, sys: ThermalSystem, rng,
                     moves=("single_bead", "staging"), width: float = 0.5,
                     seg_len: int = None) -> dict:
    """One full sweep; mutates the polymer, returns acceptance counts."""
    for mv in moves:
        if mv not in ("single_bead", "staging"):
            raise InputDomainError(f"unknown move {mv!r}")
    dtau = poly.dtau
    out = {}
    if "single_bead" in moves:
        out["single_bead"] = (_single_bead_pass(poly.beads, sys, dtau, rng, width),
                              poly.n_beads)
    if "staging" in moves:
        #near-full rebuilds decorrelate the ring in a few sweeps
        if seg_len is None:
            seg_len = max(2, poly.n_beads // 4)
        if seg_len > poly.n_beads - 2:
            raise InputDomainError("staging segment must leave >= 2 beads fixed")
        acc = sum(_staging_pass(poly.beads, sys, dtau, rng, seg_len)
                  for _ in range(2))
        out["staging"] = (acc, 2)
    return out


def blocking_error(samples: np.ndarray):
    """Flyvbjerg-Petersen blocking: (error, tau_int, plateau_reached)."""
    a = np.asarray(samples, dtype=float)
    if a.size < 32:
        raise InputDomainError("need >= 32 samples for blocking")
    errs = []
    while a.size >= 16:
        errs.append(a.std(ddof=1) / np.sqrt(a.size))
        half = a.size // 2
        a = 0.5 * (a[: 2 * half : 2] + a[1 : 2 * half : 2])
    errs = np.array(errs)
    err = float(errs.max())
    tau = 0.5 * (err / errs[0]) ** 2 if errs[0] > 0 else 0.5
    plateau = bool(errs.size >= 3 and abs(errs[-1] - errs[-2]) < 0.25 * errs[-1])
    return err, float(tau), plateau


@dataclass(frozen=True)
class EstimatorResult:
    mean: float
    error: float
    tau_int: float
    n_samples: int
    acceptance: dict = field(default_factory=dict)


def _measure(x, sys: ThermalSystem, observable: str) -> float:
    if observable == "potential_energy":
        return float(np.mean(sys.v(x)))
    if observable == "total_energy_virial":
        #confined systems: E = <V + x V'/2>
        return float(np.mean(sys.v(x) + 0.5 * x * sys.v_slope(x)))
    if observable == "mean_position":
        return float(np.mean(x))
    return float(np.mean(x * x))


def estimate(observable: str, sys: ThermalSystem, n_beads: int,
             n_sweeps: int = 40000, seed: int = 0, burn_in: int = None,
             moves=("single_bead", "staging"), seg_len: int = None,
             thin: int = 1) -> EstimatorResult:
    """Sample one observable of the thermal ring polymer.

    The displacement width is tuned during burn-in toward mid-range
    acceptance; a final rate outside [0.2, 0.8] only triggers
    AcceptanceRateWarning.  Errors come from blocking.
    """
    if observable not in OBSERVABLES:
        raise InputDomainError(f"observable must be one of {OBSERVABLES}")
    if n_beads < 4:
        raise InputDomainError("need at least 4 beads")
    if burn_in is None:
        burn_in = max(2000, n_sweeps // 10)
    rng = np.random.default_rng(seed)
    poly = RingPolymer(np.zeros(n_beads), sys.beta)
    width = 0.5 * np.sqrt(sys.temperature / sys.mass + poly.dtau / sys.mass)

    acc = tot = 0
    for i in range(burn_in):
        res = metropolis_sweep(poly, sys, rng, moves, width, seg_len)
        if "single_bead" in res:
            acc += res["single_bead"][0]
            tot += res["single_bead"][1]
        if (i + 1) % 200 == 0 and tot:
            rate = acc / tot
            if rate < 0.4:
                width *= 0.8
            elif rate > 0.6:
                width *= 1.25
            acc = tot = 0

    counters = {}
    trace = np.empty(n_sweeps // thin)
    kept = 0
    for i in range(n_sweeps):
        res = metropolis_sweep(poly, sys, rng, moves, width, seg_len)
        for k, (a, t) in res.items():
            c = counters.setdefault(k, [0, 0])
            c[0] += a
            c[1] += t
        if i % thin == 0:
            trace[kept] = _measure(poly.beads, sys, observable)
            kept += 1
    trace = trace[:kept]
    rates = {k: c[0] / c[1] for k, c in counters.items()}
    if "single_bead" in rates and not 0.2 <= rates["single_bead"] <= 0.8:
        warnings.warn(f"single-bead acceptance {rates['single_bead']:.2f} "
                      "outside [0.2, 0.8]", AcceptanceRateWarning)
    err, tau, plateau = blocking_error(trace)
    if not plateau:
        warnings.warn("blocking error did not plateau; treat the error bar "
                      "as a lower bound", AcceptanceRateWarning)
    return EstimatorResult(mean=float(trace.mean()), error=err, tau_int=tau,
                           n_samples=kept, acceptance=rates)


@dataclass(frozen=True)
class PolarizabilityResult:
    alpha: float
    error: float
    alpha_half_field: float
    error_half_field: float
    nonlinearity: float
    fields: tuple


def polarizability_finite_field(sys: ThermalSystem, field_value: float,
                                n_beads: int = 16, n_sweeps: int = 60000,
                                seed: int = 0, max_nonlinearity: float = 0.05,
                                **kwargs) -> PolarizabilityResult:
    """Static dipole polarizability from finite-field runs.

    Runs +/- field_value and +/- field_value/2; the central difference
    alpha = q (<x>_+ - <x>_-) / (2 E) at the two magnitudes must agree,
    otherwise the probe field is outside the linear regime and
    FieldTooLargeError is raised (a 3 sigma statistical guard keeps
    noise from tripping the check).
    """
    if field_value == 0:
        raise InputDomainError("probe field must be nonzero")

    def response(e_val, run_seed):
        r = estimate("mean_position", sys.with_field(e_val), n_beads,
                     n_sweeps=n_sweeps, seed=run_seed, **kwargs)
        return r.mean, r.error

    results = {}
    for j, e_val in enumerate((field_value, -field_value,
                               0.5 * field_value, -0.5 * field_value)):
        results[e_val] = response(e_val, seed + 101 * (j + 1))

    def central(e_val):
        (mp, sp), (mm, sm) = results[e_val], results[-e_val]
        a = sys.charge * (mp - mm) / (2.0 * e_val)
        s = abs(sys.charge) * np.hypot(sp, sm) / (2.0 * abs(e_val))
        return a, s

    a_full, s_full = central(field_value)
    a_half, s_half = central(0.5 * field_value)
    scale = max(abs(a_full), 1e-300)
    nonlin = abs(a_full - a_half) / scale
    if abs(a_full - a_half) > max_nonlinearity * scale + 3.0 * np.hypot(s_full, s_half):
        raise FieldTooLargeError(
            f"response differs by {nonlin:.1%} between field magnitudes "
            f"{field_value:g} and {0.5 * field_value:g}: outside linear regime")
    return PolarizabilityResult(alpha=a_full, error=s_full,
                                alpha_half_field=a_half, error_half_field=s_half,
                                nonlinearity=nonlin,
                                fields=(field_value, 0.5 * field_value))
