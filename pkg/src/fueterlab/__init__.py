"""Quaternionic perturbed fractional Fueter operator calculus.

Numerical operators and identity verifiers for quaternion-valued analysis on
4D boxes: Riemann-Liouville fractional calculus of complex order, Fueter
operators for arbitrary structural sets, Cauchy-kernel transforms, anchored
fractional Fueter operators with their potentials, the perturbed operator
family, and quadrature-based verification of the Stokes / reproduction
identities the calculus satisfies.
"""

from .algebra import (ComplexQuaternion, Quaternion, StructuralSet, psi_coords,
                      psi_scalar_product, psi_synth, qinverse, qmul, scalar_product,
                      validate_structural_set)
from .errors import (BoundaryTooCloseError, ConfigError, DomainError, FueterLabError,
                     NotOrthonormalError, OrderOutOfRangeError, SingularPathError,
                     SingularPointError, SingularityOnGridError, UndefinedOnBoundaryError,
                     ZeroDivisorError)
from .fraccalc import (FracOrder, Profile1D, Segment1D, rl_const_derivative_oracle,
                       rl_derivative_left, rl_derivative_right, rl_integral_left,
                       rl_integral_right, rl_monomial_derivative_oracle,
                       rl_monomial_integral_oracle)
from .fracfueter import (AnchoredPoint, FracOrderVec, cal_i, cal_i_field,
                         cal_i_quadrature_oracle, frac_fueter_left, frac_fueter_right,
                         frac_integral_j, verify_frac_identity)
from .fueter import (Field, KernelValue, borel_pompeiu_classical_residual, cauchy_kernel,
                     constant_field, fueter_left, fueter_right, multiply_field,
                     stokes_classical_residual, teodorescu_field, teodorescu_left,
                     teodorescu_right)
from .geometry import Box4, BoundaryFace, boundary_integral, box_measure, volume_integral
from .harness import SuiteConfig, run_suite
from .perturbed import (Perturbation, PerturbedContext, borel_pompeiu_perturbed_residual,
                        cauchy_corollary_check, correction_M, correction_N,
                        exp_cauchy_kernel_K, frac_cauchy_kernel_K, h_potential_left,
                        h_potential_right, left_mul, perturbed_frac_fueter_left,
                        perturbed_frac_fueter_right, right_mul, stokes_perturbed_residual,
                        verify_proposition)
from .quadrature import QuadratureSpec
from .reports import IdentityReport, RunReport, emit_report

__version__ = "0.1.0"
