"""Band structures, spectral gaps and thin-limit diagnostics for periodic
waveguides with a twisted, scaled cross section."""

from .bands import (BandStructure, BorgVerdict, Gap, GapReport, analyze_gaps,
                    borg_test, brillouin_grid, compute_bands, corrected_solver,
                    effective_solver, fiber_solver, symmetry_monotonicity_check)
from .convergence import SweepResult, eps_sweep, fit_rate
from .cross_section import (SectionGrid, SectionSpectrum, neumann_eigs,
                            uniform_gap, weighted_section_eigs)
from .effective_1d import (FourierTruncation, assemble_corrected,
                           assemble_direct, assemble_form, assemble_hill,
                           effective_eigs)
from .eigensolve import EigenResult, generalized_eigs, residual_check
from .errors import (DimensionTooLarge, FloorTooHigh, GapViolation,
                     InconsistentBands, InsufficientData, NoConvergence,
                     NotPositiveDefinite, ParseError, PropertyViolation,
                     SolverFailure, TubeSelfIntersecting, ValidationError,
                     WavebandsError)
from .fiber3d import (FiberDiscretization, OperatorPencil, assemble_fiber,
                      fiber_eigs, fourier_diff_matrix, longitudinal_projector,
                      reduction_defect)
from .geometry import (DELTA_SAFE, PeriodicScalar, SectionShape, WaveguideSpec,
                       a_eps, eval_Rh, eval_beta, max_epsilon, potential_V,
                       validate_epsilon)

__version__ = "0.1.0"
