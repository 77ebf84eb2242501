"""Oscillatory quadrature helpers.

compose_kernels glues two single-step propagators through an integral
over the intermediate point.  The integrand is a pure complex Gaussian
chirp exp(i alpha (x - mu)^2) times slow factors, so panels of
Gauss-Legendre nodes capture the core and the analytic two-term
integration-by-parts tail closes the remainder outside the window.
"""

from __future__ import annotations

import numpy as np

from .errors import InputDomainError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def panel_quadrature(f, a: float, b: float, n_panels: int) -> complex:
    """Composite 16-point Gauss-Legendre integral of f over [a, b]."""
    if n_panels < 1:
        raise InputDomainError("need at least one panel")
    edges = np.linspace(a, b, n_panels + 1)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    #nodes: (panels, 16)
    x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = f(x.ravel()).reshape(x.shape)
    return complex(np.sum(half[:, None] * _GL_WEIGHTS[None, :] * vals))


def compose_kernels(k_late, k_early, alpha: complex, mu: float,
                    half_width: float = 80.0, points_per_cycle: float = 16.0) -> complex:
    """Integrate k_late(x) * k_early(x) dx over the whole line.

    k_early(x) evaluates the first-step propagator into x, k_late(x)
    the second step out of x (both vectorized).  alpha and mu describe
    the stationary-phase structure of the product: the combined phase
    is alpha (x - mu)^2 + const, so alpha sets the local chirp rate and
    mu the stationary point.  The window [mu - R, mu + R] is integrated
    with composite Gauss-Legendre panels sized to the edge chirp; the
    tails are added in closed form from two orders of integration by
    parts, g(x) ~ product amplitude:

        int_R^inf g e^{i alpha (x-mu)^2} dx
            = -g(mu+R) [1/(2 i alpha R) + 1/(2 i alpha)^2 / R^3] + O(R^-5)
    """
    if half_width <= 0:
        raise InputDomainError("half_width must be positive")
    a_r = float(np.real(alpha))
    if a_r == 0.0:
        raise InputDomainError("alpha must have a nonzero oscillatory part")

    def g(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return k_late(x) * k_early(x)

    #Edge chirp frequency |2 alpha R| / 2pi cycles per unit length
    cycles = abs(a_r) * half_width**2 / np.pi
    n_panels = max(64, int(cycles * points_per_cycle / 16.0) + 1)
    core = panel_quadrature(g, mu - half_width, mu + half_width, n_panels)

    ia2 = 2j * alpha
    tail_hi = -complex(g(mu + half_width)[0]) * (1.0 / (ia2 * half_width)
                                                 + 1.0 / (ia2**2 * half_width**3))
    tail_lo = -complex(g(mu - half_width)[0]) * (1.0 / (ia2 * half_width)
                                                 + 1.0 / (ia2**2 * half_width**3))
    return core + tail_hi + tail_lo
