"""Groebner bases over prime fields and the isotopism/isomorphism systems."""

from .buchberger import (
    GBStats,
    GroebnerBasis,
    GroebnerBudgetExceeded,
    NotZeroDimensional,
    buchberger,
    find_point,
    is_groebner_basis,
    normal_form,
    reduce_basis,
    standard_monomial_count,
)
from .ideals import (
    IdealSpec,
    determinant,
    extract_witness,
    isomorphism_ideal,
    isotopism_ideal,
    solution_count,
)
from .poly import ORDERS, Polynomial, PolyRing

__all__ = [
    "GBStats", "GroebnerBasis", "GroebnerBudgetExceeded", "IdealSpec", "NotZeroDimensional", "ORDERS",
    "PolyRing", "Polynomial", "buchberger", "determinant", "extract_witness", "find_point",
    "is_groebner_basis", "isomorphism_ideal", "isotopism_ideal", "normal_form", "reduce_basis",
    "solution_count", "standard_monomial_count",
]
