"""Exact arithmetic substrate: balls, number fields, polynomials, parsing."""

from .ball import ComplexBall
from .field import (
    QQ,
    ExactScalar,
    FieldMismatchError,
    NumberField,
    multiquadratic_field,
    render_scalar,
    sqrt_in_field,
)
from .poly import (
    Poly,
    critical_value_poly,
    derivative,
    eval_poly,
    poly_gcd,
    resultant,
    squarefree_decomposition,
)

__all__ = [
    "ComplexBall",
    "QQ",
    "ExactScalar",
    "FieldMismatchError",
    "NumberField",
    "multiquadratic_field",
    "render_scalar",
    "sqrt_in_field",
    "Poly",
    "critical_value_poly",
    "derivative",
    "eval_poly",
    "poly_gcd",
    "resultant",
    "squarefree_decomposition",
]
