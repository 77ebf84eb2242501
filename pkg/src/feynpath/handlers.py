"""Request handlers shared by the command line and the HTTP service.

Each handler takes a flat parameter dict (missing keys fall back to
the defaults declared here), runs the corresponding computation and
returns the standard payload.  Domain violations raise
InputDomainError; a run that finishes but misses an internal
cross-check tolerance raises ToleranceError.
"""

from __future__ import annotations

import warnings

import numpy as np

from . import coherent, grin, kernels, lattice, media, pimc, potentials
from ._output import run_payload
from .errors import InputDomainError, ToleranceError


def _get(params: dict, defaults: dict) -> dict:
    unknown = set(params) - set(defaults)
    if unknown:
        raise InputDomainError(f"unknown parameters: {sorted(unknown)}")
    out = dict(defaults)
    out.update({k: v for k, v in params.items() if v is not None})
    return out


def _capture(record):
    return [f"warning: {w.message}" for w in record]


def _potential_from(kind: str, mass: float, omega: float, c0: float, c1: float, c2: float):
    if kind == "free":
        return potentials.free()
    if kind == "harmonic":
        return potentials.harmonic(mass, omega)
    if kind == "quadratic":
        return potentials.quadratic(c0, c1, c2)
    raise InputDomainError(f"unknown potential kind {kind!r}")


def handle_kernel(params: dict) -> dict:
    p = _get(params, dict(kind="free", xa=0.0, xb=0.0, t=1.0,
                          mass=1.0, hbar=1.0, omega=1.0))
    ends = kernels.SpacetimeEndpoints(p["xa"], p["xb"], 0.0, p["t"])
    if p["kind"] == "free":
        part = kernels.ParticleParams(p["mass"], p["hbar"])
        k = kernels.free_kernel(ends, part)
        action = kernels.free_action(ends, part)
    elif p["kind"] == "harmonic":
        osc = kernels.OscillatorParams(p["mass"], p["hbar"], p["omega"])
        k = kernels.ho_kernel(ends, osc)
        action = kernels.ho_action(ends, osc)
    else:
        raise InputDomainError("kernel kind must be 'free' or 'harmonic'")
    return run_payload("kernel", p, {
        "re": k.real, "im": k.imag, "abs": abs(k),
        "phase": float(np.angle(k)), "action": action,
    })


def handle_lattice(params: dict) -> dict:
    p = _get(params, dict(kind="free", xa=0.0, xb=1.0, t=1.0, n_slices=32,
                          method="gaussian_recursion", mass=1.0, hbar=1.0,
                          omega=1.0, c0=0.0, c1=0.0, c2=0.0,
                          grid_min=-8.0, grid_max=8.0, grid_n=2048))
    part = kernels.ParticleParams(p["mass"], p["hbar"])
    ends = kernels.SpacetimeEndpoints(p["xa"], p["xb"], 0.0, p["t"])
    V = _potential_from(p["kind"], p["mass"], p["omega"], p["c0"], p["c1"], p["c2"])
    slicing = lattice.TimeSlicing.for_duration(int(p["n_slices"]), p["t"])
    grid = lattice.SpatialGrid(p["grid_min"], p["grid_max"], int(p["grid_n"]))
    k = lattice.lattice_kernel(ends, part, V, slicing, method=p["method"], grid=grid)
    results = {"re": k.real, "im": k.imag, "abs": abs(k)}
    if p["kind"] == "free":
        ref = kernels.free_kernel(ends, part)
    elif p["kind"] == "harmonic":
        ref = kernels.ho_kernel(ends, kernels.OscillatorParams(
            p["mass"], p["hbar"], p["omega"]))
    else:
        ref = None
    if ref is not None:
        results["reference_re"] = ref.real
        results["reference_im"] = ref.imag
        results["abs_error"] = abs(k - ref)
    return run_payload("lattice", p, results)


def handle_evolve(params: dict) -> dict:
    p = _get(params, dict(kind="free", t=1.0, mass=1.0, hbar=1.0, omega=1.0,
                          x0=0.0, sigma0=1.0, p0=0.0,
                          grid_min=-24.0, grid_max=24.0, grid_n=1024))
    part = kernels.ParticleParams(p["mass"], p["hbar"])
    grid = lattice.SpatialGrid(p["grid_min"], p["grid_max"], int(p["grid_n"]))
    x = grid.x
    psi0 = ((np.pi * p["sigma0"] ** 2) ** -0.25
            * np.exp(-0.5 * (x - p["x0"]) ** 2 / p["sigma0"] ** 2
                     + 1j * p["p0"] * x / p["hbar"]))
    if p["kind"] == "free":
        def kern(xb, xa, T):
            pref = np.sqrt(part.mass / (2j * np.pi * part.hbar * T))
            return pref * np.exp(0.5j * part.mass * (xb - xa) ** 2 / (part.hbar * T))
    elif p["kind"] == "harmonic":
        osc = kernels.OscillatorParams(p["mass"], p["hbar"], p["omega"])

        def kern(xb, xa, T):
            wT = osc.omega * T
            s, c = np.sin(wT), np.cos(wT)
            pref = np.sqrt(osc.mass * osc.omega / (2j * np.pi * osc.hbar * s))
            return pref * np.exp(0.5j * osc.mass * osc.omega
                                 * ((xb**2 + xa**2) * c - 2.0 * xa * xb) / (osc.hbar * s))
    else:
        raise InputDomainError("evolve kind must be 'free' or 'harmonic'")
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        psi1 = lattice.evolve_wavefunction(psi0, grid, kern, p["t"])
    n0 = grid.dx * float(np.sum(np.abs(psi0) ** 2))
    n1 = grid.dx * float(np.sum(np.abs(psi1) ** 2))
    rows = [[float(xv), float(a.real), float(a.imag), float(abs(a) ** 2)]
            for xv, a in zip(x, psi1)]
    return run_payload("evolve", p, {
        "norm_in": n0, "norm_out": n1,
        "table": {"columns": ["x", "re", "im", "abs2"], "rows": rows},
    }, errors=_capture(rec))


def handle_double_slit(params: dict) -> dict:
    p = _get(params, dict(separation=2.0, width=0.2, d_source_screen=1.0,
                          d_screen_detector=1.0, t=1.0, x_source=0.0,
                          mass=1.0, hbar=1.0, open_1=True, open_2=True,
                          screen_min=-12.0, screen_max=12.0, screen_n=512))
    geom = lattice.SlitGeometry(
        slit_centers=(-0.5 * p["separation"], 0.5 * p["separation"]),
        slit_widths=(p["width"], p["width"]),
        d_source_screen=p["d_source_screen"],
        d_screen_detector=p["d_screen_detector"],
        total_time=p["t"], x_source=p["x_source"],
        open_slits=(bool(p["open_1"]), bool(p["open_2"])))
    part = kernels.ParticleParams(p["mass"], p["hbar"])
    x_det = np.linspace(p["screen_min"], p["screen_max"], int(p["screen_n"]))
    res = lattice.double_slit_pattern(geom, x_det, part)
    ident = float(np.max(np.abs(res.total - res.single_1 - res.single_2 - res.cross)))
    rows = [[float(a), float(b), float(c), float(d), float(e)]
            for a, b, c, d, e in zip(res.x, res.total, res.single_1,
                                     res.single_2, res.cross)]
    return run_payload("double-slit", p, {
        "tau_star": geom.tau_star, "identity_residual": ident,
        "table": {"columns": ["x", "total", "single_1", "single_2", "cross"],
                  "rows": rows},
    })


def handle_grin(params: dict) -> dict:
    p = _get(params, dict(n0=1.5, g=0.8, wavelength=0.314159265358979,
                          z=1.0, xa=0.1, xb=0.3, n_max=60))
    medium = grin.GrinMedium(p["n0"], p["g"], p["wavelength"])
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        k_ray = grin.grin_kernel(p["xa"], p["xb"], p["z"], medium)
        k_mode = grin.mode_kernel(p["xa"], p["xb"], 0.0, p["z"], medium,
                                  int(p["n_max"]))
    return run_payload("grin", p, {
        "ray_re": k_ray.real, "ray_im": k_ray.imag,
        "mode_re": k_mode.real, "mode_im": k_mode.imag,
        "abs_diff": abs(k_ray - k_mode),
    }, errors=_capture(rec))


def handle_dpa(params: dict) -> dict:
    p = _get(params, dict(omega=1.0, kappa=0.3, ta=0.0, tb=1.0,
                          alpha_a_re=1.0, alpha_a_im=0.0,
                          alpha_b_re=0.5, alpha_b_im=0.0))
    a = complex(p["alpha_a_re"], p["alpha_a_im"])
    b = complex(p["alpha_b_re"], p["alpha_b_im"])
    closed = coherent.dpa_propagator(a, b, p["ta"], p["tb"], p["omega"], p["kappa"])
    H = coherent.QuadraticHamiltonian.degenerate_amplifier(p["omega"], p["kappa"])
    xyz = coherent.solve_xyz(H, p["ta"], p["tb"])
    numeric = coherent.quadratic_propagator(a, b, H, xyz)
    diff = abs(closed - numeric)
    if diff > 1e-6:
        raise ToleranceError(f"closed-form and integrated propagators "
                             f"disagree by {diff:.3e}")
    return run_payload("dpa", p, {
        "re": closed.real, "im": closed.imag,
        "numeric_re": numeric.real, "numeric_im": numeric.imag,
        "abs_diff": diff,
    })


def handle_pimc(params: dict) -> dict:
    p = _get(params, dict(observable="total_energy_virial", system="ho",
                          mass=1.0, omega=1.0, temperature=1.0, beads=32,
                          sweeps=20000, seed=0, charge=0.0, field=0.0,
                          seg_len=None))
    if p["system"] not in ("ho", "harmonic"):
        raise InputDomainError("system must be 'ho' or 'harmonic'")
    sys = pimc.ThermalSystem(p["mass"], potentials.harmonic(p["mass"], p["omega"]),
                             p["temperature"], p["charge"], p["field"])
    seg = None if p["seg_len"] is None else int(p["seg_len"])
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        r = pimc.estimate(p["observable"], sys, int(p["beads"]),
                          n_sweeps=int(p["sweeps"]), seed=int(p["seed"]),
                          seg_len=seg)
    results = {"mean": r.mean, "error": r.error, "tau_int": r.tau_int,
               "n_samples": r.n_samples}
    for k, v in sorted(r.acceptance.items()):
        results[f"acceptance_{k}"] = v
    if p["omega"] > 0:
        u = p["omega"] / (2.0 * p["temperature"])
        e_exact = 0.5 * p["omega"] / np.tanh(u)
        if p["observable"] == "total_energy_virial":
            results["continuum_reference"] = e_exact
        elif p["observable"] == "potential_energy":
            results["continuum_reference"] = 0.5 * e_exact
    return run_payload("pimc", p, results, errors=_capture(rec),
                       seed=int(p["seed"]))


def handle_spdc(params: dict) -> dict:
    if params.get("gamma_l") is not None and params.get("big_gamma") is not None:
        raise InputDomainError("give the loss as big_gamma or gamma_l, not both")
    p = _get(params, dict(delta_k=0.0, big_gamma=None, gamma_l=None, length=1.0,
                          scan_from=None, scan_to=None, scan_n=None,
                          k_signal=40.0, k_idler=40.0))
    if p["gamma_l"] is not None:
        p["big_gamma"] = p["gamma_l"] / p["length"]
    elif p["big_gamma"] is None:
        p["big_gamma"] = 1.0
    if p["scan_from"] is not None:
        if p["scan_to"] is None or p["scan_n"] is None:
            raise InputDomainError("a scan needs scan_from, scan_to and scan_n")
        dks = np.linspace(p["scan_from"], p["scan_to"], int(p["scan_n"]))
        probs = media.spdc_probability(dks, p["big_gamma"], p["length"])
        rows = [[float(a), float(b)] for a, b in zip(dks, probs)]
        return run_payload("spdc", p, {
            "table": {"columns": ["delta_k", "probability"], "rows": rows}})
    prob = media.spdc_probability(p["delta_k"], p["big_gamma"], p["length"])
    medium = media.DispersiveMedium1D.from_constants(
        p["k_signal"], p["k_idler"], p["delta_k"], p["big_gamma"], p["length"])
    numeric = media.pair_probability_numeric(medium)
    diff = abs(prob - numeric)
    if diff > 1e-6 * max(1.0, prob):
        raise ToleranceError(f"closed form and vertex quadrature disagree "
                             f"by {diff:.3e}")
    return run_payload("spdc", p, {
        "probability": float(prob), "numeric": numeric, "abs_diff": diff})


def handle_emission(params: dict) -> dict:
    p = _get(params, dict(eps1=1.0, eps2=0.5, gamma0=1.0, omega0=1.0))
    env = media.EmitterEnvironment(p["eps1"], p["eps2"], p["gamma0"], p["omega0"])
    rate = media.spontaneous_rate(env)
    loop = media.imag_green_loop(env)
    residual = abs(rate / env.gamma0 - 4.0 * np.pi * loop / env.omega0)
    if residual > 1e-12:
        raise ToleranceError(f"rate and Green-loop identities disagree: {residual:.3e}")
    return run_payload("emission", p, {
        "rate": rate, "imag_green_loop": loop, "identity_residual": residual})


def handle_dielectric(params: dict) -> dict:
    p = _get(params, dict(omega0=1.0, beta=0.5, coupling=1, eps0=1.0,
                          damping=0.0, frequency=0.0,
                          scan_from=None, scan_to=None, scan_n=None))
    lam = media.lorentz_feedback(p["damping"]) if p["damping"] else None
    model = media.EffectiveDielectricModel(p["omega0"], p["beta"],
                                           int(p["coupling"]), p["eps0"], lam)
    if p["scan_from"] is not None:
        if p["scan_to"] is None or p["scan_n"] is None:
            raise InputDomainError("a scan needs scan_from, scan_to and scan_n")
        ws = np.linspace(p["scan_from"], p["scan_to"], int(p["scan_n"]))
        rows = []
        for w in ws:
            e = media.effective_dielectric(float(w), model)
            rows.append([float(w), float(np.real(e)), float(np.imag(e))])
        return run_payload("dielectric", p, {
            "table": {"columns": ["frequency", "eps_re", "eps_im"], "rows": rows}})
    e = media.effective_dielectric(p["frequency"], model)
    return run_payload("dielectric", p, {
        "eps_re": float(np.real(e)), "eps_im": float(np.imag(e)),
        "static_limit": 1.0 + p["coupling"] * p["beta"]})


HANDLERS = {
    "kernel": handle_kernel,
    "lattice": handle_lattice,
    "evolve": handle_evolve,
    "double-slit": handle_double_slit,
    "grin": handle_grin,
    "dpa": handle_dpa,
    "pimc": handle_pimc,
    "spdc": handle_spdc,
    "emission": handle_emission,
    "dielectric": handle_dielectric,
}
