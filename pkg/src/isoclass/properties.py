"""Checkable structural laws, shared by the test-suite and ``isoclass selftest``.

Each ``check_*`` function takes concrete inputs and returns True when the law
holds. ``random_*`` helpers draw inputs from a ``numpy.random.Generator``.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .algebra import Algebra, IsotopismTriple, LinearMap, apply_isotopism
from .colorgraph import enumerate_triangles, cube_trace, is_isomorphism, signature, triangle_free
from .functor import build_g1, build_g2, build_graph, extract_maps_from_graph_iso, predicted_signature, \
    transport_isotopism_to_graph
from .groebner import PolyRing, buchberger
from .latin import PartialLatinSquare, PermTriple, act, all_pls, lift_magma_isotopism, ring_of


# --- generators ----------------------------------------------------------------


def random_algebra(rng: np.random.Generator, n: int | None = None, p: int | None = None,
                   density: float | None = None) -> Algebra:
    n = n or int(rng.integers(1, 4))
    p = p or int(rng.choice([2, 3]))
    density = rng.uniform(0.1, 0.9) if density is None else density
    c = rng.integers(0, p, size=(n, n, n)) * (rng.random((n, n, n)) < density)
    return Algebra(p, c)


def random_invertible(rng: np.random.Generator, n: int, p: int) -> LinearMap:
    GL = linalg.general_linear_group(n, p)
    return LinearMap(GL[int(rng.integers(len(GL)))], p)


def random_triple(rng: np.random.Generator, n: int, p: int, isomorphism: bool = False) -> IsotopismTriple:
    if isomorphism:
        return IsotopismTriple.diagonal(random_invertible(rng, n, p))
    return IsotopismTriple(*(random_invertible(rng, n, p) for _ in range(3)))


def random_perm_triple(rng: np.random.Generator, n: int) -> PermTriple:
    return PermTriple(*(tuple(int(x) for x in rng.permutation(n)) for _ in range(3)))


def random_pls(rng: np.random.Generator, n: int) -> PartialLatinSquare:
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if rng.random() < 0.6:
                used = set(grid[i]) | {grid[r][j] for r in range(n)}
                free = [x for x in range(1, n + 1) if x not in used]
                if free:
                    grid[i][j] = int(rng.choice(free))
    return PartialLatinSquare(tuple(tuple(r) for r in grid))


# --- laws ----------------------------------------------------------------------


def _image(A: Algebra, m: LinearMap, idx) -> set:
    V = A.vectors
    return set(linalg.vector_indices(V[np.asarray(sorted(idx), dtype=np.int64)] @ m.matrix % A.p, A.p).tolist()) \
        if len(idx) else set()


def check_annihilator_transport(A: Algebra, t: IsotopismTriple, subset=None) -> bool:
    """``f`` carries left annihilators of ``S`` to those of ``g(S)``; ``g`` right ones to ``f(S)``."""
    B = apply_isotopism(A, t)
    S = list(range(A.size)) if subset is None else sorted(subset)
    vecs = lambda idx: [A.vector(i) for i in sorted(idx)]
    gS, fS = vecs(_image(A, t.g, S)), vecs(_image(A, t.f, S))
    left_ok = _image(A, t.f, A.left_annihilator_indices(vecs(S))) == set(B.left_annihilator_indices(gS).tolist())
    right_ok = _image(A, t.g, A.right_annihilator_indices(vecs(S))) == set(B.right_annihilator_indices(fS).tolist())
    both = True
    if t.is_isomorphism and subset is None:
        ann_a = set(A.left_annihilator_indices().tolist()) & set(A.right_annihilator_indices().tolist())
        ann_b = set(B.left_annihilator_indices().tolist()) & set(B.right_annihilator_indices().tolist())
        both = _image(A, t.f, ann_a) == ann_b
    return left_ok and right_ok and both


def check_derived_transport(A: Algebra, t: IsotopismTriple) -> bool:
    """``h`` carries the set of products of ``A`` onto that of the isotope."""
    B = apply_isotopism(A, t)
    return _image(A, t.h, A.derived_indices()) == set(B.derived_indices().tolist())


def check_graph_transport(A: Algebra, t: IsotopismTriple) -> bool:
    B = apply_isotopism(A, t)
    which = "g2" if t.is_isomorphism else "g1"
    alpha = transport_isotopism_to_graph(A, B, t, which)
    return is_isomorphism(build_graph(A, which), build_graph(B, which), alpha)


def check_extracted_maps(A: Algebra, t: IsotopismTriple) -> bool:
    """Maps read off a graph isomorphism are bijective and multiplicative."""
    B = apply_isotopism(A, t)
    which = "g2" if t.is_isomorphism else "g1"
    alpha = transport_isotopism_to_graph(A, B, t, which)
    ext = extract_maps_from_graph_iso(A, B, alpha, which)
    return ext.bijective and ext.multiplicative


def check_predicted_signature(A: Algebra) -> bool:
    for which in ("g1", "g2"):
        measured = signature(build_graph(A, which), triangles=False)
        if predicted_signature(A, which) != measured:
            return False
    return True


def check_g1_triangle_free(A: Algebra) -> bool:
    return triangle_free(build_g1(A))


def check_cell_degrees(A: Algebra) -> bool:
    for G in (build_g1(A), build_g2(A)):
        if any(G.degree(v) != 3 for v, c in enumerate(G.colors) if c == "T"):
            return False
    return True


def check_triangle_trace(A: Algebra) -> bool:
    G = build_g2(A)
    return cube_trace(G) == 6 * enumerate_triangles(G)


def check_reduced_basis_unique(gens, rng: np.random.Generator) -> bool:
    """Same reduced basis after shuffling generators and injecting a redundant one."""
    base = buchberger(gens)
    shuffled = [gens[i] for i in rng.permutation(len(gens))]
    if gens:
        extra = gens[0] * gens[-1] + gens[0]
        shuffled.insert(int(rng.integers(len(shuffled) + 1)), extra)
    other = buchberger(shuffled, gens[0].ring if gens else None)
    return [g.terms for g in base] == [g.terms for g in other]


def random_system(rng: np.random.Generator, max_vars: int = 3):
    """A few small random polynomials in 1 to ``max_vars`` variables.

    Lex systems over the full ring (no field equations) stay at two
    variables: with three, plain Buchberger can climb through exponents in
    the hundreds before the basis settles.
    """
    p = int(rng.choice([2, 3]))
    order = str(rng.choice(["lex", "degrevlex"]))
    field_reduced = bool(rng.random() < 0.5)
    if order == "lex" and not field_reduced:
        max_vars = min(max_vars, 2)
    nv = int(rng.integers(1, max_vars + 1))
    R = PolyRing(p, [f"x{i}" for i in range(nv)], order, field_reduced=field_reduced)
    gens = []
    for _ in range(int(rng.integers(1, 5))):
        terms = {}
        for _ in range(int(rng.integers(1, 4))):
            exps = [int(x) for x in rng.integers(0, 3, size=nv)]
            terms[R.mono(exps)] = int(rng.integers(1, p))
        gens.append(R(terms))
    return gens


def check_action_laws(L: PartialLatinSquare, t1: PermTriple, t2: PermTriple) -> bool:
    n = L.n
    return act(PermTriple.identity(n), L) == L and act(t2.compose(t1), L) == act(t2, act(t1, L))


def check_commuting_square(L: PartialLatinSquare, t: PermTriple, p: int) -> bool:
    """Ring of the permuted square = isotope of the ring under the lifted triple."""
    return ring_of(act(t, L), p) == apply_isotopism(ring_of(L, p), lift_magma_isotopism(t, p))


def small_census():
    """Every ring of a PLS of order 2 over F_2 and F_3 (for exhaustive checks)."""
    return [ring_of(L, p) for p in (2, 3) for L in all_pls(2)]
