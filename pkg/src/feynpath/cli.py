"""Command-line client for the computation handlers.

Every subcommand accepts --config FILE (key=value lines, # comments;
explicit flags win), --format csv|json, --output FILE, and the worker
cap --threads (falling back to the FEYNPATH_THREADS environment
variable).  Exit codes: 0 success, 2 validation error, 3 numerical
tolerance failure.  Seeded commands rerun byte-identically.
"""

from __future__ import annotations

import argparse
import os
import sys

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_TOLERANCE = 3


def load_config(path: str) -> dict:
    """Parse key=value lines; values fall through str -> int -> float -> bool."""
    out = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{ln}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = _coerce(val)
    return out


def _coerce(val: str):
    low = val.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    for cast in (int, float):
        try:
            return cast(val)
        except ValueError:
            pass
    return val


def _apply_threads(threads):
    if threads is None:
        threads = os.environ.get("FEYNPATH_THREADS")
    if not threads:
        return
    n = str(int(threads))
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                "NUMEXPR_NUM_THREADS"):
        os.environ.setdefault(var, n)


def _add_common(sub):
    sub.add_argument("--config", help="key=value parameter file")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--output", help="write to this path instead of stdout")


def _float_opt(sub, *names):
    for n in names:
        sub.add_argument(f"--{n}", type=float, default=None)


def _int_opt(sub, *names):
    for n in names:
        sub.add_argument(f"--{n}", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="feynpath",
        description="Path-integral propagators, lattice reconstruction, "
                    "Monte Carlo thermodynamics and photonics")
    ap.add_argument("--threads", type=int, default=None,
                    help="cap worker threads (default: FEYNPATH_THREADS)")
    ap.add_argument("--self-test", action="store_true",
                    help="run the built-in oracle suite and exit")
    sp = ap.add_subparsers(dest="command")

    s = sp.add_parser("kernel", help="closed-form propagator at fixed endpoints")
    s.add_argument("--kind", "--type", dest="kind",
                   choices=("free", "harmonic"), default=None)
    _float_opt(s, "xa", "xb", "t", "mass", "hbar", "omega")
    _add_common(s)

    s = sp.add_parser("lattice", help="time-sliced propagator reconstruction")
    s.add_argument("--kind", choices=("free", "harmonic", "quadratic"), default=None)
    s.add_argument("--method", choices=("gaussian_recursion", "grid_transfer"),
                   default=None)
    _float_opt(s, "xa", "xb", "t", "mass", "hbar", "omega", "c0", "c1", "c2",
               "grid-min", "grid-max")
    _int_opt(s, "n-slices", "grid-n")
    _add_common(s)

    s = sp.add_parser("evolve", help="propagate a Gaussian packet on a grid")
    s.add_argument("--kind", choices=("free", "harmonic"), default=None)
    _float_opt(s, "t", "mass", "hbar", "omega", "x0", "sigma0", "p0",
               "grid-min", "grid-max")
    _int_opt(s, "grid-n")
    _add_common(s)

    s = sp.add_parser("double-slit", help="two-slit interference decomposition")
    _float_opt(s, "separation", "width", "d-source-screen", "d-screen-detector",
               "t", "x-source", "mass", "hbar", "screen-min", "screen-max")
    _int_opt(s, "screen-n")
    s.add_argument("--close-slit", type=int, choices=(1, 2), default=None,
                   help="block one aperture")
    _add_common(s)

    s = sp.add_parser("grin", help="graded-index propagator, rays vs modes")
    _float_opt(s, "n0", "g", "wavelength", "z", "xa", "xb")
    _int_opt(s, "n-max")
    _add_common(s)

    s = sp.add_parser("dpa", help="degenerate amplifier coherent propagator")
    _float_opt(s, "omega", "kappa", "ta", "tb", "alpha-a-re", "alpha-a-im",
               "alpha-b-re", "alpha-b-im")
    _add_common(s)

    s = sp.add_parser("pimc", help="thermal ring-polymer sampling")
    s.add_argument("--observable", default=None,
                   choices=("potential_energy", "total_energy_virial",
                            "mean_position", "mean_square"))
    s.add_argument("--system", choices=("ho", "harmonic"), default=None)
    s.add_argument("--temperature", "--temp", dest="temperature", type=float,
                   default=None)
    _float_opt(s, "mass", "omega", "charge", "field")
    _int_opt(s, "beads", "sweeps", "seed", "seg-len")
    _add_common(s)

    s = sp.add_parser("spdc", help="pair-production probability of a pumped slab")
    s.add_argument("--delta-k", "--dk", dest="delta_k", type=float, default=None)
    s.add_argument("--length", "--l", dest="length", type=float, default=None)
    s.add_argument("--gamma-l", dest="gamma_l", type=float, default=None,
                   help="dimensionless loss-length product Gamma*L")
    _float_opt(s, "big-gamma", "scan-from", "scan-to", "k-signal", "k-idler")
    _int_opt(s, "scan-n")
    _add_common(s)

    s = sp.add_parser("emission", help="spontaneous emission in a lossy dielectric")
    _float_opt(s, "eps1", "eps2", "gamma0", "omega0")
    _add_common(s)

    s = sp.add_parser("dielectric", help="effective dielectric of a reservoir model")
    _float_opt(s, "omega0", "beta", "eps0", "damping", "frequency",
               "scan-from", "scan-to")
    _int_opt(s, "coupling", "scan-n")
    _add_common(s)

    return ap


_COMMON_KEYS = {"config", "format", "output", "threads", "self_test", "command",
                "close_slit"}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _apply_threads(args.threads)

    if args.self_test:
        from .selftest import run_selftest
        failures = run_selftest(sys.stdout)
        if failures:
            sys.stdout.write(f"{failures} check(s) failed\n")
            return EXIT_TOLERANCE
        sys.stdout.write("all checks passed\n")
        return EXIT_OK

    if args.command is None:
        ap.print_help()
        return EXIT_VALIDATION

    from ._output import to_csv, to_json
    from .errors import InputDomainError, ToleranceError
    from .handlers import HANDLERS

    params = {k: v for k, v in vars(args).items()
              if k not in _COMMON_KEYS and v is not None}
    if args.config:
        try:
            cfg = load_config(args.config)
        except (OSError, ValueError) as exc:
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_VALIDATION
        for k, v in cfg.items():
            params.setdefault(k, v)
    if getattr(args, "close_slit", None):
        params[f"open_{args.close_slit}"] = False

    try:
        payload = HANDLERS[args.command](params)
    except InputDomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except ToleranceError as exc:
        sys.stderr.write(f"tolerance failure: {exc}\n")
        return EXIT_TOLERANCE

    text = to_json(payload) if args.format == "json" else to_csv(payload)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
