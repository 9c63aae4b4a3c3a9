"""O(2)-equivariant Hopf analysis of the diffusive Brusselator.

Dispersion/onset computation, critical eigenfunctions, normal-form
coefficients by independent routes, reduced-dynamics branch and stability
classification, and a pseudospectral simulator for cross-checking the
bifurcated waves in the full PDE.
"""

__version__ = "0.1.0"

from .errors import (DomainMismatch, InadmissibleRegime, NonPositiveParameter,
                     NoSaturation, NumericalBlowup, O2HopfError, SingularSystem,
                     StepSizeUnderflow, WindowTooShort)
from .meanzero import zero_mode_content
from .modes import ModeSum, R01, R20, R21, R30
from .normalform import (NormalFormCoeffs, PsiTable, closed_form_constants,
                         coeff_a, coeff_b, coeff_c, coeffs, coeffs_report,
                         solve_psi)
from .params import ModelParams, OnsetData, load_config, onset, validate
from .pdesim import (FieldState, SimConfig, Simulator,
                     amplitude_scaling_experiment, equivariance_test, grid,
                     initialize, measure_growth_rate, mode_amplitude,
                     oscillation_frequency, rhs_norm,
                     timestep_convergence_order)
from .reduced import (BranchPoint, ReducedSystem, branch_frequency, branches,
                      classify_regime, integrate_truncated, polar_vector_field,
                      reconstruct_wave)
from .spectral import (ModeRecord, ScanResult, TuringReport, dispersion_curve,
                       inner_product, mode_eigenvalues, mode_matrix,
                       onset_scan, turing_check, xi1, xi1_star, xi2)

__all__ = [name for name in dir() if not name.startswith("_")]
