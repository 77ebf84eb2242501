"""feynpath: path-integral propagators, lattice reconstruction, Monte
Carlo thermodynamics and photonic applications in one dimension."""

__version__ = "0.1.0"

from . import coherent, grin, kernels, lattice, media, pimc, potentials
from .errors import (AcceptanceRateWarning, BackendMismatchError,
                     BoundaryLeakageError, CausticError, EvanescentModeError,
                     FeynpathError, FieldTooLargeError, FocalPlaneError,
                     InputDomainError, ModeSumWarning, NormLossWarning,
                     NyquistError, ParaxialityWarning, QuadratureError,
                     ResonancePoleError, RiccatiBlowupError, ToleranceError,
                     TotalInternalReflectionError)
from .kernels import (OscillatorParams, ParticleParams, SpacetimeEndpoints,
                      free_action, free_kernel, ho_action, ho_kernel,
                      quadratic_prefactor_check, refraction_action,
                      slice_amplitude, snell_refract)
from .lattice import (SlitGeometry, SpatialGrid, TimeSlicing,
                      double_slit_pattern, evolve_wavefunction,
                      gaussian_recursion, grid_transfer, grid_transfer_many,
                      lattice_action, lattice_kernel)
from .grin import (EnvelopeSolution, GrinMedium, RayPair, eigenmodes,
                   grin_kernel, mode_kernel, propagate_beam, solve_envelope,
                   solve_rays)
from .coherent import (CoherentLabel, QuadraticHamiltonian, XYZSolution,
                       compose_propagators_mc, dpa_propagator,
                       expectation_annihilation, quadratic_propagator,
                       solve_xyz)
from .pimc import (EstimatorResult, RingPolymer, ThermalSystem, estimate,
                   metropolis_sweep, polarizability_finite_field,
                   primitive_action)
from .media import (DispersiveMedium1D, EffectiveDielectricModel,
                    EmitterEnvironment, biphoton_amplitude,
                    effective_dielectric, green_1d, imag_green_loop,
                    pair_probability_numeric, spdc_probability,
                    spontaneous_rate)
