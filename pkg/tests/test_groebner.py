import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isoclass import linalg, oracle, properties as props
from isoclass.algebra import Algebra, LinearMap, IsotopismTriple, verify_isomorphism, verify_isotopism
from isoclass.groebner import (GroebnerBudgetExceeded, NotZeroDimensional, PolyRing, buchberger, determinant,
                               extract_witness, find_point, is_groebner_basis, isomorphism_ideal, isotopism_ideal,
                               normal_form, reduce_basis, solution_count, standard_monomial_count)
from isoclass.latin import pls_isotopism_classes, ring_of

import naive_groebner as naive


def ring(p, names="x y", order="lex", reduced=False):
    return PolyRing(p, names.split(), order, field_reduced=reduced)


def as_tuples(f):
    return {f.ring.exponents(m): c for m, c in f.terms.items()}


# --- polynomial arithmetic ------------------------------------------------------


def test_parse_and_print():
    R = ring(3, "x y z", "degrevlex")
    f = R.parse("2*x^2*y - y + 1")
    assert str(f) == "2*x^2*y + 2*y + 1"
    assert R.parse(str(f)) == f
    with pytest.raises(ValueError):
        R.parse("x + w")


def test_orders():
    lex, drl = ring(2, "x y z", "lex"), ring(2, "x y z", "degrevlex")
    for R, want in ((lex, "x"), (drl, "y^2")):
        f = R.parse("x + y^2")
        assert R.format_mono(f.lm()) == want
    # degrevlex ties broken by the smallest power of the last variable
    f = drl.parse("x*z + y^2")
    assert drl.format_mono(f.lm()) == "y^2"


def test_field_reduction_is_eager():
    R = ring(3, "x y", reduced=True)
    assert R.parse("x^3") == R.parse("x")
    assert R.parse("x^4*y^5") == R.parse("x^2*y")
    B = ring(2, "x y", reduced=True)
    assert B.parse("x^2*y") == B.parse("x*y")


@settings(max_examples=200)
@given(st.integers(0, 10**9))
def test_arithmetic_matches_evaluation(seed):
    rng = np.random.default_rng(seed)
    f = props.random_system(rng)[0]
    R = f.ring
    g = f * f + R.gen(0) + 1
    for point in itertools.product(range(R.p), repeat=R.nvars):
        a, b = f.evaluate(point), g.evaluate(point)
        assert (f + g).evaluate(point) == (a + b) % R.p
        assert (f * g).evaluate(point) == (a * b) % R.p
        assert (f - g).evaluate(point) == (a - b) % R.p
        assert (f ** 3).evaluate(point) == pow(a, 3, R.p)


# --- worked examples -------------------------------------------------------------


def test_normal_forms():
    R = ring(2, "x")
    f = R.parse("x^2 + x")
    assert not normal_form(f, [f])
    assert normal_form(R.parse("x^2"), [f]) == R.parse("x")
    S = ring(2)
    assert normal_form(S.parse("x*y"), [S.parse("x + y"), S.parse("y^2 + y")]) == S.parse("y")


def test_small_bases():
    R = ring(2)
    assert [str(g) for g in buchberger([R.parse("x")])] == ["x"]
    gb = buchberger([R.parse("x + y"), R.parse("x^2 + x")])
    assert sorted(str(g) for g in gb) == ["x + y", "y^2 + y"]
    T = ring(3)
    assert sorted(str(g) for g in reduce_basis([T.parse("x"), T.parse("2*x + y")])) == ["x", "y"]
    U = ring(2, "x")
    assert [str(g) for g in reduce_basis([U.parse("x^2 + x"), U.parse("x")])] == ["x"]


def test_standard_monomial_counts():
    R = ring(2, reduced=True)
    assert standard_monomial_count(buchberger([R.parse("x + 1"), R.parse("y")])) == 1
    assert standard_monomial_count(buchberger([], R)) == 4
    full = ring(3)
    assert standard_monomial_count(buchberger([full.parse("x^3 - x"), full.parse("y^2")])) == 6
    with pytest.raises(NotZeroDimensional):
        standard_monomial_count(buchberger([full.parse("x")]))


def test_unit_ideal():
    R = ring(3, reduced=True)
    gb = buchberger([R.parse("x"), R.parse("x + 1")])
    assert gb.is_unit() and standard_monomial_count(gb) == 0
    assert find_point([R.parse("x"), R.parse("x + 1")], R) is None


def test_budget_is_reported():
    A, B = ring_of(pls_isotopism_classes(2)[0], 2), ring_of(pls_isotopism_classes(2)[1], 2)
    with pytest.raises(GroebnerBudgetExceeded):
        isotopism_ideal(A, B).groebner(budget=2)


# --- cross-checks against independent references ---------------------------------------


def variety(gens, R):
    return [pt for pt in itertools.product(range(R.p), repeat=R.nvars) if all(g.evaluate(pt) == 0 for g in gens)]


@settings(max_examples=300)
@given(st.integers(0, 10**9))
def test_engine_matches_textbook_buchberger(seed):
    rng = np.random.default_rng(seed)
    gens = props.random_system(rng)
    R = gens[0].ring.with_options(field_reduced=True)
    lifted = [R(dict((R.mono(gens[0].ring.exponents(m)), c) for m, c in g.terms.items())) for g in gens]
    gb = buchberger(lifted, R)
    assert is_groebner_basis(list(gb))
    full = R.with_options(field_reduced=False)
    ref = naive.groebner([as_tuples(g) for g in
                          [full(dict((full.mono(R.exponents(m)), c) for m, c in g.terms.items())) for g in lifted]]
                         + naive.field_equations(R.nvars, R.p), R.order, R.p)
    ours = [as_tuples(g) for g in gb.with_field_equations()]
    key = naive.order_key(R.order)
    assert sorted(ours, key=lambda g: key(naive.lead(g, key))) == ref
    V = variety(lifted, R)
    assert standard_monomial_count(gb) == len(V)
    pt = find_point(lifted, R)
    assert (pt is None) == (not V) and (pt is None or pt in V)


@settings(max_examples=300)
@given(st.integers(0, 10**9))
def test_full_ring_bases_match_textbook(seed):
    rng = np.random.default_rng(seed)
    # no field equations here, so the reference (no pair criteria) is kept to two variables
    gens = props.random_system(rng, max_vars=2)
    R = gens[0].ring
    if R.field_reduced:
        R = R.with_options(field_reduced=False)
        gens = [R(dict((R.mono(gens[0].ring.exponents(m)), c) for m, c in g.terms.items())) for g in gens]
    ref = naive.groebner([as_tuples(g) for g in gens], R.order, R.p)
    key = naive.order_key(R.order)
    ours = sorted((as_tuples(g) for g in buchberger(gens, R)), key=lambda g: key(naive.lead(g, key)))
    assert ours == ref


@settings(max_examples=200)
@given(st.integers(0, 10**9))
def test_reduced_basis_is_independent_of_generator_order(seed):
    rng = np.random.default_rng(seed)
    assert props.check_reduced_basis_unique(props.random_system(rng), rng)


@settings(max_examples=200)
@given(st.integers(0, 10**9))
def test_normal_form_decides_membership(seed):
    rng = np.random.default_rng(seed)
    gens = props.random_system(rng)
    gb = buchberger(gens)
    R = gens[0].ring
    combo = R.zero()
    for g in gens:
        multiplier = R({R.mono([int(x) for x in rng.integers(0, 2, R.nvars)]): int(rng.integers(1, R.p))})
        combo = combo + g * multiplier
    assert gb.contains(combo)
    for g in gens:
        assert not gb.reduce(g)


# --- equivalence ideals -----------------------------------------------------------------


def test_determinant_matches_numeric():
    R = PolyRing(3, [f"a{i}{j}" for i in range(3) for j in range(3)])
    M = [[R.gen(f"a{i}{j}") for j in range(3)] for i in range(3)]
    d = determinant(M)
    for vals in [np.eye(3, dtype=int), np.array([[1, 2, 0], [0, 1, 1], [2, 0, 1]])]:
        assert d.evaluate(vals.ravel().tolist()) == linalg.det(vals, 3)


def test_isotopism_ideal_examples(pair_f2, pair_f3):
    Z1 = Algebra.zero(1, 2)
    assert solution_count(isotopism_ideal(Z1, Z1)) == 1
    assert solution_count(isotopism_ideal(*pair_f2)) == 4
    assert solution_count(isotopism_ideal(*pair_f3)) == 0
    assert solution_count(isomorphism_ideal(*pair_f2)) == 1
    Z2 = Algebra.zero(2, 2)
    assert solution_count(isomorphism_ideal(Z2, Z2)) == 6
    assert solution_count(isomorphism_ideal(Z2, pair_f2[1])) == 0


def brute_all_triples(A, B):
    """Triples of arbitrary (possibly singular) matrices with f(e_i) g(e_j) = h(e_i e_j)."""
    mats = [np.array(m).reshape(A.n, A.n) for m in itertools.product(range(A.p), repeat=A.n * A.n)]
    P = {}
    for F, G in itertools.product(range(len(mats)), repeat=2):
        P[F, G] = np.einsum("ik,jl,klm->ijm", mats[F], mats[G], B.c) % A.p
    CH = [np.einsum("ijs,sm->ijm", A.c, H) % A.p for H in mats]
    return sum(1 for (F, G), lhs in P.items() for H in CH if np.array_equal(lhs, H))


def test_dropping_determinants_admits_singular_triples(pair_f2):
    A, B = pair_f2
    loose = solution_count(isotopism_ideal(A, B, with_det=False))
    assert loose == brute_all_triples(A, B)
    assert loose > solution_count(isotopism_ideal(A, B))


def test_lex_and_degrevlex_agree(pair_f2):
    A, B = pair_f2
    for order in ("lex", "degrevlex"):
        assert solution_count(isotopism_ideal(A, B, order=order)) == 4


@pytest.mark.parametrize("i", range(8))
def test_order_two_ring_pairs_match_oracle(i):
    reps = [ring_of(L, 2) for L in pls_isotopism_classes(2)]
    A = reps[i]
    for B in reps:
        assert solution_count(isotopism_ideal(A, B)) == oracle.count_isotopisms(A, B)
        assert solution_count(isomorphism_ideal(A, B)) == oracle.count_isomorphisms(A, B)


@pytest.mark.parametrize("p", [2, 3])
def test_witness_extraction(p):
    reps = [ring_of(L, p) for L in pls_isotopism_classes(2)]
    for A, B in itertools.product(reps, repeat=2):
        t = extract_witness(isotopism_ideal(A, B))
        assert (t is None) == (oracle.find_isotopism(A, B) is None)
        if t is not None:
            assert verify_isotopism(A, B, t)
        f = extract_witness(isomorphism_ideal(A, B))
        if f is not None:
            assert verify_isomorphism(A, B, f)


def test_pair_budget_stops_a_runaway_lex_computation():
    # plain lex Buchberger climbs past x2^400 here; the budget turns that into "undecided"
    R = PolyRing(2, ["x0", "x1", "x2"], "lex")
    x0, x1, x2 = (R.gen(i) for i in range(3))
    gens = [x0 * x0 * x2 * x2 + x0 * x1 * x2 * x2 + 1, x0 * x0 * x1 + x0 * x2 * x2 + x0,
            x0 * x1 * x1 * x2 + x0 * x2 * x2 + x1 * x1 * x2]
    with pytest.raises(GroebnerBudgetExceeded):
        buchberger(gens, budget=30)
    # the same ideal is small in degrevlex, and with the field equations it is the variety
    grev = buchberger(_recast(gens, R.with_options(order="degrevlex")))
    assert standard_monomial_count(grev) == 14
    reduced = R.with_options(field_reduced=True)
    assert standard_monomial_count(buchberger(_recast(gens, reduced))) == len(variety(_recast(gens, reduced), reduced))


def _recast(gens, R):
    return [R(dict((R.mono(g.ring.exponents(m)), c) for m, c in g.terms.items())) for g in gens]
