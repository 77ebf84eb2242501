"""Potential models for lattice and thermal path sampling.

A PotentialModel wraps V(x) together with enough structure for the
exact-slice machinery: free, harmonic and general quadratic wells keep
their coefficients (V = c0 + c1*x + c2*x**2) so one time slice can be
propagated in closed form, while tabulated data falls back to a cubic
spline and midpoint slicing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InputDomainError

QUADRATIC_KINDS = ("free", "harmonic", "quadratic")


@dataclass
class PotentialModel:
    kind: str
    c0: float = 0.0
    c1: float = 0.0
    c2: float = 0.0
    table: object = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in QUADRATIC_KINDS + ("tabulated",):
            raise InputDomainError(f"unknown potential kind {self.kind!r}")
        if self.kind == "tabulated" and self.table is None:
            raise InputDomainError("tabulated potential needs sample data")

    @property
    def is_quadratic(self) -> bool:
        return self.kind in QUADRATIC_KINDS

    def __call__(self, x):
        if self.kind == "tabulated":
            return self.table(x)
        return self.c0 + self.c1 * x + self.c2 * x * x

    def derivative(self, x):
        if self.kind == "tabulated":
            return self.table(x, 1)
        return self.c1 + 2.0 * self.c2 * x


def free() -> PotentialModel:
    return PotentialModel("free", label="free")


def harmonic(mass: float, omega: float) -> PotentialModel:
    """V(x) = m w^2 x^2 / 2."""
    if mass <= 0 or omega < 0:
        raise InputDomainError("harmonic well needs mass > 0 and omega >= 0")
    if omega == 0.0:
        return free()
    return PotentialModel("harmonic", c2=0.5 * mass * omega**2,
                          label=f"harmonic(m={mass:g}, w={omega:g})")


def quadratic(c0: float, c1: float, c2: float) -> PotentialModel:
    return PotentialModel("quadratic", c0=c0, c1=c1, c2=c2,
                          label=f"quadratic({c0:g}, {c1:g}, {c2:g})")


def tabulated(x: np.ndarray, v: np.ndarray) -> PotentialModel:
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if x.ndim != 1 or x.shape != v.shape or x.size < 4:
        raise InputDomainError("tabulated potential needs matching 1d arrays, >= 4 points")
    if np.any(np.diff(x) <= 0):
        raise InputDomainError("tabulated abscissae must increase strictly")
    return PotentialModel("tabulated", table=CubicSpline(x, v), label="tabulated")


def from_callable(v: Callable[[np.ndarray], np.ndarray],
                  x_min: float, x_max: float, n: int = 2001) -> PotentialModel:
    """Sample an arbitrary callable onto a spline table."""
    xs = np.linspace(x_min, x_max, n)
    return tabulated(xs, np.asarray(v(xs), dtype=float))
