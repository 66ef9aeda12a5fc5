import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from isoclass.algebra import alternating_from_products
from isoclass.colorgraph import (BudgetExceeded, ColoredGraph, canonical_certificate, canonical_form, complete_graph,
                                 cube_trace, enumerate_triangles, find_isomorphism, is_isomorphism, signature,
                                 triangle_count)
from isoclass.functor import build_g1, build_g2
from isoclass.latin import parse_pls, ring_of


def to_nx(G):
    H = nx.Graph()
    H.add_nodes_from((v, {"color": c}) for v, c in enumerate(G.colors))
    H.add_edges_from(G.edges)
    return H


def nx_isomorphic(G, H):
    return nx.is_isomorphic(to_nx(G), to_nx(H), node_match=lambda a, b: a["color"] == b["color"])


def random_graph(seed, n=None, colors="ab", density=None):
    rng = random.Random(seed)
    n = n if n is not None else rng.randint(0, 9)
    density = rng.random() if density is None else density
    cols = [rng.choice(colors) for _ in range(n)]
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < density]
    return ColoredGraph(cols, edges)


def shuffled(G, seed):
    perm = list(range(G.order))
    random.Random(seed).shuffle(perm)
    return G.relabeled(perm), perm


def rook_graph():
    cells = list(itertools.product(range(4), repeat=2))
    return ColoredGraph(["x"] * 16, [(a, b) for a, b in itertools.combinations(range(16), 2)
                                     if cells[a][0] == cells[b][0] or cells[a][1] == cells[b][1]])


def shrikhande_graph():
    cells = list(itertools.product(range(4), repeat=2))
    steps = {(0, 1), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)}
    return ColoredGraph(["x"] * 16, [(a, b) for a, b in itertools.combinations(range(16), 2)
                                     if ((cells[a][0] - cells[b][0]) % 4, (cells[a][1] - cells[b][1]) % 4) in steps])


def test_empty_graph_signature():
    s = signature(ColoredGraph([], []))
    assert (s.color_counts, s.edges, s.triangles, s.degrees) == ((), 0, 0, ())


def test_triangle_counts():
    assert triangle_count(complete_graph(3)) == 1
    assert triangle_count(complete_graph(5)) == 10
    assert triangle_count(ColoredGraph("xxxx", [(0, 1), (1, 2), (2, 3), (3, 0)])) == 0


def test_ring_graph_table_values():
    A = ring_of(parse_pls("10 00"), 2)
    s1, s2 = signature(build_g1(A)), signature(build_g2(A))
    assert [s1.count(c) for c in "RCST"] == [2, 2, 1, 4] and s1.edges == 12 and s1.triangles == 0
    assert (s2.edges, s2.triangles) == (16, 7)


def test_lie_g2_triangles():
    A = alternating_from_products(2, 3, "e1e2=e2, e1e3=e3")
    assert triangle_count(build_g2(A)) == 27


@settings(max_examples=200)
@given(st.integers(0, 10**9))
def test_trace_formula_matches_enumeration(seed):
    G = random_graph(seed, n=random.Random(seed).randint(0, 14))
    assert cube_trace(G) == 6 * enumerate_triangles(G) == 6 * triangle_count(G)
    assert triangle_count(G) == sum(nx.triangles(to_nx(G)).values()) // 3


def test_invalid_edges_rejected():
    for edges in ([(0, 0)], [(0, 5)], [(0, 1), (1, 0)]):
        with pytest.raises(ValueError):
            ColoredGraph("xx", edges)


@settings(max_examples=300)
@given(st.integers(0, 10**9))
def test_certificate_invariant_under_relabeling(seed):
    G = random_graph(seed)
    H, perm = shuffled(G, seed + 1)
    assert canonical_certificate(G) == canonical_certificate(H)
    iso = find_isomorphism(G, H)
    assert iso is not None and is_isomorphism(G, H, iso)


@settings(max_examples=300)
@given(st.integers(0, 10**9), st.integers(0, 10**9))
def test_certificate_equality_agrees_with_vf2(s1, s2):
    n = random.Random(s1).randint(1, 7)
    G = random_graph(s1, n=n, density=0.5)
    H = random_graph(s2, n=n, density=0.5)
    same = canonical_certificate(G) == canonical_certificate(H)
    assert same == nx_isomorphic(G, H)
    assert (find_isomorphism(G, H) is not None) == same


def test_strongly_regular_pair_is_distinguished():
    # both are srg(16, 6, 2, 2): color refinement alone cannot separate them
    R, S = rook_graph(), shrikhande_graph()
    assert signature(R) == signature(S)
    assert not nx_isomorphic(R, S)
    assert canonical_certificate(R) != canonical_certificate(S)
    assert find_isomorphism(R, S) is None
    R2, _ = shuffled(R, 7)
    assert canonical_certificate(R) == canonical_certificate(R2)


def test_colors_are_respected():
    G = ColoredGraph("ab", [(0, 1)])
    H = ColoredGraph("aa", [(0, 1)])
    assert find_isomorphism(G, H) is None
    assert not is_isomorphism(G, H, {0: 0, 1: 1})


def test_self_isomorphism_and_automorphisms():
    G = complete_graph(4)
    iso = find_isomorphism(G, G)
    assert is_isomorphism(G, G, iso)
    form = canonical_form(G)
    for gen in form.automorphism_generators:
        assert is_isomorphism(G, G, dict(enumerate(gen)))


def test_budget_exhaustion_is_an_error_not_an_answer():
    with pytest.raises(BudgetExceeded):
        canonical_form(shrikhande_graph(), budget=1)


def test_isotopic_rings_share_g1_certificate(pair_f2):
    A, B = pair_f2
    assert canonical_certificate(build_g1(A)) == canonical_certificate(build_g1(B))
    assert find_isomorphism(build_g1(A), build_g1(B)) is not None


def test_g1_and_g2_certificates_differ(pair_f2):
    A, _ = pair_f2
    assert canonical_certificate(build_g1(A)) != canonical_certificate(build_g2(A))


def test_export_format():
    G = ColoredGraph("ab", [(0, 1)], names=[("r", 1), ("s", 2)])
    lines = G.export().splitlines()
    assert lines[0].startswith("0 a:") and lines[0].endswith(" 1")
