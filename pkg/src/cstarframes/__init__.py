"""Continuous frames and their duals in Hilbert C*-modules.

The coefficient algebra is a finite direct sum of matrix algebras, the module
is ``A^k`` and measures are intervals with polynomial weights (integrated by
exact Gauss rules) or finite atomic measures.
"""

from .algebra import (
    AlgebraDescriptor,
    AlgebraElement,
    hermitian_eigenvalues,
    inverse,
    is_central,
    is_hermitian,
    is_positive,
    is_unitary,
    op_norm,
    order_leq,
)
from .duals import (
    combine,
    dual_decompose,
    dual_from_k_operator,
    dual_sequence,
    dual_sequence_closed,
    dual_sequence_step,
    k_operator_from_dual,
    kernel_symmetry_check,
    minimality_check,
    null_bessel_family,
)
from .errors import CertificationError, FrameError, InputError
from .frames import (
    analysis,
    bessel_bound,
    canonical_dual,
    certify_frame,
    cross_gram,
    frame_operator,
    is_dual_pair,
    is_frame,
    optimal_frame_bounds,
    riesz_type_diagnostic,
    synthesis,
    verify_claimed_bounds,
)
from .measure import (
    Discrete,
    FrameMap,
    Interval,
    L2Element,
    QuadratureRule,
    build_rule,
    default_degree,
    l2_inner,
)
from .module import LEFT, RIGHT, ModuleElement, ModuleOperator, apply_operator, inner
from .problem import parse_problem_file, parse_problem_text
from .sums import (
    affine_sum_dual,
    central_sum_dual,
    dual_pair_under_operators,
    identity_check,
    operator_sum_dual,
    operator_sum_frame,
    scaled_map,
    unitary_dual_transfer,
)

__all__ = [
    "affine_sum_dual", "AlgebraDescriptor", "AlgebraElement", "analysis", "apply_operator",
    "bessel_bound", "build_rule", "canonical_dual", "central_sum_dual",
    "CertificationError", "certify_frame", "combine", "cross_gram", "default_degree",
    "Discrete", "dual_decompose", "dual_from_k_operator", "dual_pair_under_operators",
    "dual_sequence", "dual_sequence_closed", "dual_sequence_step", "frame_operator",
    "FrameError", "FrameMap", "hermitian_eigenvalues", "identity_check", "inner",
    "InputError", "Interval", "inverse", "is_central", "is_dual_pair", "is_frame",
    "is_hermitian", "is_positive", "is_unitary", "k_operator_from_dual",
    "kernel_symmetry_check", "l2_inner", "L2Element", "LEFT", "minimality_check",
    "ModuleElement", "ModuleOperator", "null_bessel_family", "op_norm",
    "operator_sum_dual", "operator_sum_frame", "optimal_frame_bounds", "order_leq",
    "parse_problem_file", "parse_problem_text", "QuadratureRule", "riesz_type_diagnostic",
    "RIGHT", "scaled_map", "synthesis", "unitary_dual_transfer", "verify_claimed_bounds",
]

__version__ = "0.1.0"
