"""Planar integrable models with cubic or quartic invariants of motion.

Construction from prepotential solution families, verification of the
structure and master equations by jet arithmetic and finite differences,
and conservation tests by trajectory integration.
"""

from .errors import (ConstructionError, DomainError, PathError,
                     QuadratureError, SingularityError)
from .jets import (Jet1, Jet2, deriv, fd_deriv, jet_arith, partial_jet,
                   pow_real, seed, seed1, signed_cbrt, sqrt, value)
from .prepotential import (AMPLITUDE, BETA0, BETA_PM, SIMULTANEOUS,
                           PrepotentialParams, cubic_roots, f_taylor, g_eval,
                           p_eval, p_jet, reduced_residual,
                           reduced_residual_normalized, rescale_p, s_of_p)
from .models import (CATALOG_INFO, Field, ModelDescriptor, ModelFunctions,
                     R_quadrature, build_cubic, build_quartic, build_wave,
                     catalog, catalog_names, descriptor_to_dict,
                     from_descriptor, invariant_vars,
                     structure_residual_terms)
from .verify import (VerificationReport, grid_report, master_terms,
                     residual_master, residual_master_normalized,
                     residual_structure)
from .dynamics import (PhaseState, TrajectoryReport, eval_I1, eval_I2,
                       eval_I2_reducible, integrate, rhs, time_reversed,
                       write_trajectory_csv, zero_energy_state)
from .symmetry import (DihedralElement, apply_point, check_invariant_vars,
                       compose, distinct_images, elements, matrix,
                       rescale_genfun, transform_genfun)

__version__ = "0.1.0"
