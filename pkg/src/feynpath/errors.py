"""Exception and warning hierarchy shared by every module.

Validation problems (bad arguments, geometry outside the supported
domain) derive from InputDomainError; runs that complete but miss a
numerical target derive from ToleranceError.  The command-line layer
maps the first family to exit code 2 and the second to exit code 3.
"""


class FeynpathError(Exception):
    """Base class for all package errors."""


class InputDomainError(FeynpathError, ValueError):
    """Arguments are outside the mathematical domain of an operation."""


class CausticError(InputDomainError):
    """Oscillator propagator requested at a focal time (sin(w*T) = 0)."""


class FocalPlaneError(CausticError):
    """Graded-index propagator requested where the ray height vanishes."""


class TotalInternalReflectionError(InputDomainError):
    """No real refracted angle exists for the given indices and angle."""


class NyquistError(InputDomainError):
    """Spatial grid too coarse to resolve the fastest kernel chirp."""


class BoundaryLeakageError(InputDomainError):
    """Propagated amplitude reached the absorbing edge of the grid."""


class RiccatiBlowupError(FeynpathError):
    """Quadratic-Hamiltonian Riccati variable diverged mid-interval."""

    def __init__(self, t_blowup, message=None):
        self.t_blowup = t_blowup
        super().__init__(message or f"Riccati variable diverged near t = {t_blowup:.6g}")


class ResonancePoleError(InputDomainError):
    """Effective dielectric evaluated on top of an undamped pole."""


class EvanescentModeError(InputDomainError):
    """One-dimensional Green function requested at vanishing wavenumber."""


class FieldTooLargeError(FeynpathError):
    """Finite-field response is outside the linear regime."""


class ToleranceError(FeynpathError):
    """A numerical routine finished but violated its accuracy contract."""


class BackendMismatchError(ToleranceError):
    """Two independent propagation backends disagree beyond tolerance."""


class QuadratureError(ToleranceError):
    """An adaptive quadrature failed to converge to the requested level."""


class NormLossWarning(UserWarning):
    """Wavefunction norm decayed past the advertised threshold."""


class ModeSumWarning(UserWarning):
    """Truncated eigenmode sum has a non-negligible tail estimate."""


class ParaxialityWarning(UserWarning):
    """Transverse extent strains the weak-inhomogeneity assumption."""


class AcceptanceRateWarning(UserWarning):
    """Metropolis acceptance rate left the tuned window."""
