"""Exact exterior algebra on R^{2n}: Lefschetz operators, symplectic orbit spans
and the linear algebra behind the omega^k-preserving diffeomorphism problem."""

from .exterior import (
    Form,
    LinearMap,
    Vector,
    evaluate,
    form_power,
    interior_product,
    pullback,
    standard_symplectic_form,
    wedge,
)
from .metric import (
    CompatibleTriple,
    hodge_star,
    induced_inner_product,
    op_H,
    op_L,
    op_Lambda,
    operator_matrix,
    primitive_decompose,
    primitive_space_basis,
    volume_form,
)
from .report import CheckReport

__all__ = [
    "CheckReport",
    "CompatibleTriple",
    "Form",
    "LinearMap",
    "Vector",
    "evaluate",
    "form_power",
    "hodge_star",
    "induced_inner_product",
    "interior_product",
    "op_H",
    "op_L",
    "op_Lambda",
    "operator_matrix",
    "primitive_decompose",
    "primitive_space_basis",
    "pullback",
    "standard_symplectic_form",
    "volume_form",
    "wedge",
]
