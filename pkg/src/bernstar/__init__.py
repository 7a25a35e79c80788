"""Weighted simultaneous approximation by combinations of Bernstein operators."""

from .basis import (abs_moment, backward_diff, basis_matrix, basis_row, bernstein_apply,
                    bernstein_derivative, forward_diff, moment, sample_grid, symmetric_diff)
from .boundary import (cutoff_derivative, cutoff_value, lagrange_left, lagrange_right, modify,
                       modified_operator_apply, modified_operator_derivative)
from .combinations import (CombinationScheme, build_scheme, combined_apply,
                           combined_derivative, lagrange_coefficients,
                           moment_cancellation_check)
from .errors import DomainError, EvaluationError, InvalidArgument, Unsupported
from .metrics import (JacobiWeight, ModulusGrid, delta_n, main_part_modulus, modulus, phi,
                      weighted_sup_norm)

__version__ = "0.1.0"
