"""Isotopism and isomorphism classification of finite-dimensional algebras over F_p.

Core objects live in :mod:`isoclass.algebra`; graph invariants in
:mod:`isoclass.functor` and :mod:`isoclass.colorgraph`; exact engines in
:mod:`isoclass.oracle` (exhaustive search) and :mod:`isoclass.groebner`
(polynomial systems); census classification in :mod:`isoclass.pipeline`.
"""

from .algebra import Algebra, IsotopismTriple, LinearMap, apply_isotopism, verify_isomorphism, verify_isotopism
from .latin import PartialLatinSquare, parse_pls, ring_of

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "IsotopismTriple",
    "LinearMap",
    "PartialLatinSquare",
    "apply_isotopism",
    "parse_pls",
    "ring_of",
    "verify_isomorphism",
    "verify_isotopism",
]
