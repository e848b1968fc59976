"""Constant-coefficient differential operators, the Weyl algebra, and a GVC experiment harness."""

__version__ = "0.1.0"

from .fields import GF, QQ, QQI, FieldSpec, GaussianRational, Residue  # noqa: E402
from .polynomials import (  # noqa: E402
    DiffOp,
    Polynomial,
    Ring,
    partial_derivative,
    poly_add,
    poly_mul,
    substitute_linear,
    total_degree,
)
from .diffop import (  # noqa: E402
    Decomposition,
    apply,
    apply_power,
    commutator_action,
    commutator_decompose,
    verify_theorem1,
)
from .weyl import (  # noqa: E402
    WeylElement,
    act,
    fourier_automorphism,
    gvc_expression_as_weyl,
    in_left_ideal_partials,
    reorder_partials_left,
    weyl_mul,
)
from .reduction import (  # noqa: E402
    ExtendedRing,
    LinearForm,
    PowerSumDecomposition,
    build_extended_operator,
    build_extended_product,
    decompose_power_sums,
    extension_preserves_x_action,
    polarize_monomial,
    transform_diffop,
)
from .expr import format_expr, parse  # noqa: E402
from .errors import ParseError, SoundnessError  # noqa: E402

__all__ = [
    "FieldSpec", "GaussianRational", "Residue", "QQ", "QQI", "GF",
    "Ring", "Polynomial", "DiffOp",
    "poly_add", "poly_mul", "partial_derivative", "substitute_linear", "total_degree",
    "apply", "apply_power", "commutator_action", "commutator_decompose", "Decomposition",
    "verify_theorem1",
    "WeylElement", "weyl_mul", "act", "in_left_ideal_partials", "fourier_automorphism",
    "reorder_partials_left", "gvc_expression_as_weyl",
    "LinearForm", "PowerSumDecomposition", "ExtendedRing", "polarize_monomial",
    "decompose_power_sums", "build_extended_operator", "build_extended_product",
    "transform_diffop", "extension_preserves_x_action",
    "parse", "format_expr", "ParseError", "SoundnessError",
]
