"""Structural laws under hypothesis-generated algebras, maps and squares."""

import numpy as np
from hypothesis import given, settings, strategies as st

from isoclass import linalg, properties as props
from isoclass.algebra import Algebra, IsotopismTriple, LinearMap
from isoclass.latin import PartialLatinSquare, PermTriple

primes = st.sampled_from([2, 3])
dims = st.integers(1, 3)


@st.composite
def algebras(draw, n=None, p=None):
    n = draw(dims) if n is None else n
    p = draw(primes) if p is None else p
    flat = draw(st.lists(st.integers(0, p - 1), min_size=n ** 3, max_size=n ** 3))
    return Algebra(p, np.array(flat, dtype=np.int64).reshape(n, n, n))


@st.composite
def invertible(draw, n, p):
    GL = linalg.general_linear_group(n, p)
    return LinearMap(GL[draw(st.integers(0, len(GL) - 1))], p)


@st.composite
def algebra_and_triple(draw):
    A = draw(algebras())
    if draw(st.booleans()):
        t = IsotopismTriple.diagonal(draw(invertible(A.n, A.p)))
    else:
        t = IsotopismTriple(*(draw(invertible(A.n, A.p)) for _ in range(3)))
    return A, t


@st.composite
def squares(draw, n=None):
    n = draw(st.integers(1, 3)) if n is None else n
    grid = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            used = set(grid[i]) | {grid[r][j] for r in range(n)}
            grid[i][j] = draw(st.sampled_from([0] + [x for x in range(1, n + 1) if x not in used]))
    return PartialLatinSquare(tuple(tuple(r) for r in grid))


def perm_triples(n):
    perm = st.permutations(list(range(n))).map(tuple)
    return st.tuples(perm, perm, perm).map(lambda t: PermTriple(*t))


laws = settings(max_examples=120, deadline=None)


@laws
@given(algebra_and_triple(), st.data())
def test_annihilators_are_transported(pair, data):
    A, t = pair
    subset = data.draw(st.none() | st.sets(st.integers(0, A.size - 1)).map(sorted))
    assert props.check_annihilator_transport(A, t, subset)


@laws
@given(algebra_and_triple())
def test_product_set_is_transported(pair):
    assert props.check_derived_transport(*pair)


@laws
@given(algebra_and_triple())
def test_isotopism_induces_graph_isomorphism(pair):
    assert props.check_graph_transport(*pair)


@laws
@given(algebra_and_triple())
def test_maps_extracted_from_graph_isomorphism_are_multiplicative(pair):
    assert props.check_extracted_maps(*pair)


@laws
@given(algebras())
def test_predicted_signature_matches(A):
    assert props.check_predicted_signature(A)


@laws
@given(algebras())
def test_g1_has_no_triangles(A):
    assert props.check_g1_triangle_free(A)


@laws
@given(algebras())
def test_cell_vertices_have_degree_three(A):
    assert props.check_cell_degrees(A)


@laws
@given(algebras())
def test_cube_trace_counts_triangles(A):
    assert props.check_triangle_trace(A)


@laws
@given(st.integers(0, 2 ** 32 - 1))
def test_reduced_basis_ignores_generator_order(seed):
    rng = np.random.default_rng(seed)
    assert props.check_reduced_basis_unique(props.random_system(rng), rng)


@laws
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(squares(n), perm_triples(n), perm_triples(n))))
def test_square_action_is_a_group_action(args):
    assert props.check_action_laws(*args)


@laws
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(squares(n), perm_triples(n))), primes)
def test_permuting_a_square_isotopes_its_ring(args, p):
    L, t = args
    assert props.check_commuting_square(L, t, p)


def test_signature_law_holds_on_whole_small_census():
    for A in props.small_census():
        assert props.check_predicted_signature(A)
