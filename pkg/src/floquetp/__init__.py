"""Periodic solutions and spectra of convolution equations on Z^s over finite fields."""

from .field_tower import FieldContext, FieldElement, build_field, embed, restrict
from .lattice_quotient import (
    Sublattice,
    TorusPoint,
    dual_subgroup,
    evaluate_character,
    index,
    is_p_saturated,
    parse_sublattice,
    quotient,
)
from .group_algebra import (
    DualFunction,
    GroupAlgebraElement,
    LaurentPoly,
    PeriodicFunction,
    apply_convolution,
    convolve,
    dft_forward,
    dft_inverse,
    fourier,
    pushforward,
    shift,
    shift_element,
)
from .matrix_spectral import (
    MatrixOperator,
    count_multipliers,
    det_symbol,
    finite_support_solution,
    generalized_eigenspace,
    jordan_basis,
    multipliers,
    periodic_solutions,
    spectral_decomposition,
    symbol_matrix,
)
from .scalar_spectral import eigendecompose, harmonic_kernel, symbolic_variety_points
from .fragmentation import fragment_function, fragment_operator, fragmentation_map, voltage_operator
from .trace_descent import DescentRequest, descend_kernel, gf_q_kernel_basis

__version__ = "0.1.0"

__all__ = [
    "DescentRequest",
    "DualFunction",
    "FieldContext",
    "FieldElement",
    "GroupAlgebraElement",
    "LaurentPoly",
    "MatrixOperator",
    "PeriodicFunction",
    "Sublattice",
    "TorusPoint",
    "apply_convolution",
    "build_field",
    "convolve",
    "count_multipliers",
    "descend_kernel",
    "det_symbol",
    "dft_forward",
    "dft_inverse",
    "dual_subgroup",
    "eigendecompose",
    "embed",
    "evaluate_character",
    "finite_support_solution",
    "fourier",
    "fragment_function",
    "fragment_operator",
    "fragmentation_map",
    "generalized_eigenspace",
    "gf_q_kernel_basis",
    "harmonic_kernel",
    "index",
    "is_p_saturated",
    "jordan_basis",
    "multipliers",
    "parse_sublattice",
    "periodic_solutions",
    "pushforward",
    "quotient",
    "restrict",
    "shift",
    "shift_element",
    "spectral_decomposition",
    "symbol_matrix",
    "symbolic_variety_points",
    "voltage_operator",
]
