"""Polynomial systems whose F_q-points are isotopisms or isomorphisms.

Variables ``f{i}{j}``, ``g{i}{j}``, ``h{i}{j}`` (1-based) are the entries of
the matrices of the maps in the row convention used throughout the package.
For basis vectors the condition ``f(e_i) g(e_j) = h(e_i e_j)`` reads, in the
coordinate ``m``::

    sum_{k,l} f_ik g_jl c'_kl^m  -  sum_s c_ij^s h_sm  =  0

Nonsingularity is imposed by ``det(X)^(q-1) - 1`` (Fermat: a nonzero residue
raised to ``q-1`` is 1). Field equations ``x^q - x`` are implicit because the
polynomials live in a field-reduced ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .. import linalg
from ..algebra import Algebra, IsotopismTriple, LinearMap, _check_compatible
from .buchberger import GroebnerBasis, buchberger, find_point, standard_monomial_count
from .poly import Polynomial, PolyRing


@dataclass
class IdealSpec:
    ring: PolyRing
    generators: list[Polynomial]
    kind: str  # "isotopism" or "isomorphism"
    n: int
    with_det: bool

    @property
    def field_equations(self) -> list[Polynomial]:
        full = self.ring.with_options(field_reduced=False)
        return [full.field_equation(i) for i in range(full.nvars)]

    def full_generators(self) -> list[Polynomial]:
        """Generators over the full polynomial ring, field equations appended."""
        full = self.ring.with_options(field_reduced=False)
        out = [Polynomial(full, {full.mono(self.ring.exponents(m)): c for m, c in g.terms.items()})
               for g in self.generators]
        return out + self.field_equations

    def groebner(self, budget: int | None = None) -> GroebnerBasis:
        return buchberger(self.generators, self.ring, budget)


def _var_names(letters: str, n: int) -> list[str]:
    return [f"{x}{i + 1}{j + 1}" for x in letters for i in range(n) for j in range(n)]


def _matrix_vars(R: PolyRing, letter: str, n: int) -> list[list[Polynomial]]:
    return [[R.gen(f"{letter}{i + 1}{j + 1}") for j in range(n)] for i in range(n)]


def determinant(M: list[list[Polynomial]]) -> Polynomial:
    """Leibniz expansion of a square matrix of polynomials."""
    n = len(M)
    R = M[0][0].ring
    total = R.zero()
    for sign, perm in linalg.leibniz_terms(n):
        term = R.one() * sign
        for i, j in enumerate(perm):
            term = term * M[i][j]
        total = total + term
    return total


def _nonsingular(M) -> Polynomial:
    R = M[0][0].ring
    return determinant(M) ** (R.p - 1) - 1


def _product_equations(A: Algebra, B: Algebra, F, G, H) -> list[Polynomial]:
    n, Ac, Bc = A.n, A.c, B.c
    R = F[0][0].ring
    out = []
    for i, j, m in itertools.product(range(n), repeat=3):
        poly = R.zero()
        for k, l in itertools.product(range(n), repeat=2):
            if Bc[k, l, m]:
                poly = poly + F[i][k] * G[j][l] * int(Bc[k, l, m])
        for s in range(n):
            if Ac[i, j, s]:
                poly = poly - H[s][m] * int(Ac[i, j, s])
        if poly:
            out.append(poly)
    return out


def isotopism_ideal(A: Algebra, B: Algebra, with_det: bool = True, order: str = "degrevlex") -> IdealSpec:
    """System whose F_q-points are the isotopisms ``A -> B``."""
    _check_compatible(A, B)
    n = A.n
    R = PolyRing(A.p, _var_names("fgh", n), order, field_reduced=True)
    F, G, H = (_matrix_vars(R, x, n) for x in "fgh")
    gens = _product_equations(A, B, F, G, H)
    if with_det:
        gens += [_nonsingular(M) for M in (F, G, H)]
    return IdealSpec(R, gens, "isotopism", n, with_det)


def isomorphism_ideal(A: Algebra, B: Algebra, with_det: bool = True, order: str = "degrevlex") -> IdealSpec:
    """System whose F_q-points are the isomorphisms ``A -> B``."""
    _check_compatible(A, B)
    n = A.n
    R = PolyRing(A.p, _var_names("f", n), order, field_reduced=True)
    F = _matrix_vars(R, "f", n)
    gens = _product_equations(A, B, F, F, F)
    if with_det:
        gens.append(_nonsingular(F))
    return IdealSpec(R, gens, "isomorphism", n, with_det)


def solution_count(system: IdealSpec, budget: int | None = None) -> int:
    """Number of F_q-points: standard monomials of the reduced basis."""
    return standard_monomial_count(system.groebner(budget))


def _maps_from_point(system: IdealSpec, point) -> list[LinearMap]:
    n, p = system.n, system.ring.p
    vals = np.array(point, dtype=np.int64).reshape(-1, n, n)
    return [LinearMap(m, p) for m in vals]


def extract_witness(system: IdealSpec, budget: int | None = None):
    """An isotopism triple (or isomorphism map) from a point, or None."""
    if not system.with_det:
        raise ValueError("witness extraction needs the nonsingularity equations")
    point = find_point(system.generators, system.ring, budget)
    if point is None:
        return None
    maps = _maps_from_point(system, point)
    if system.kind == "isomorphism":
        return maps[0]
    return IsotopismTriple(*maps)
