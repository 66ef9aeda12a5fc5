"""The graphs G1(A) and G2(A) attached to a finite algebra.

Vertices of G1(A), colored R, C, S, T::

    r_u  for u outside the left annihilator of A
    c_u  for u outside the right annihilator of A
    s_u  for nonzero u in the derived set {uv}
    t_uv for pairs with uv != 0, adjacent to r_u, c_v and s_{uv}

G2(A) adds the edges r_u c_u, c_u s_u and r_u s_u whenever both endpoints
exist. Isotopic algebras have isomorphic G1 graphs, isomorphic algebras have
isomorphic G2 graphs; conversely a graph isomorphism yields bijective (not
necessarily linear) maps with ``f(u) g(v) = h(uv)``.

Vertex names are ``("r", u)``, ``("c", u)``, ``("s", u)`` and ``("t", u, v)``
with ``u, v`` coordinate tuples; vertices are numbered R, C, S, T in that
order, each block in lexicographic vector order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import Algebra, IsotopismTriple, _check_compatible, verify_isotopism
from .colorgraph import ColoredGraph, Signature, is_isomorphism

COLORS = ("R", "C", "S", "T")


class NotAnIsotopism(ValueError):
    pass


@dataclass(frozen=True)
class _Parts:
    rows: np.ndarray  # vector indices u with an r_u vertex
    cols: np.ndarray
    syms: np.ndarray
    cells: np.ndarray  # (k, 2) index pairs (u, v) with uv != 0


def _parts(A: Algebra) -> _Parts:
    t = A.table
    nonzero = t != 0
    rows = np.nonzero(nonzero.any(axis=1))[0]
    cols = np.nonzero(nonzero.any(axis=0))[0]
    derived = np.unique(t)
    syms = derived[derived != 0]
    cells = np.argwhere(nonzero)
    return _Parts(rows, cols, syms, cells)


def _build(A: Algebra, extra: bool) -> ColoredGraph:
    P = _parts(A)
    vec = A.vector
    colors: list[str] = []
    names: list[tuple] = []
    r_id, c_id, s_id = {}, {}, {}
    for u in P.rows:
        r_id[int(u)] = len(colors)
        colors.append("R")
        names.append(("r", vec(u)))
    for u in P.cols:
        c_id[int(u)] = len(colors)
        colors.append("C")
        names.append(("c", vec(u)))
    for u in P.syms:
        s_id[int(u)] = len(colors)
        colors.append("S")
        names.append(("s", vec(u)))
    edges = []
    t = A.table
    for u, v in P.cells:
        u, v = int(u), int(v)
        tv = len(colors)
        colors.append("T")
        names.append(("t", vec(u), vec(v)))
        edges.append((r_id[u], tv))
        edges.append((c_id[v], tv))
        edges.append((s_id[int(t[u, v])], tv))
    if extra:
        for u, ru in r_id.items():
            if u in c_id:
                edges.append((ru, c_id[u]))
            if u in s_id:
                edges.append((ru, s_id[u]))
        for u, cu in c_id.items():
            if u in s_id:
                edges.append((cu, s_id[u]))
    return ColoredGraph(colors, edges, names)


def build_g1(A: Algebra) -> ColoredGraph:
    return _build(A, extra=False)


def build_g2(A: Algebra) -> ColoredGraph:
    return _build(A, extra=True)


def build_graph(A: Algebra, which: str) -> ColoredGraph:
    if which.lower() in ("g1", "1"):
        return build_g1(A)
    if which.lower() in ("g2", "2"):
        return build_g2(A)
    raise ValueError(f"unknown graph {which!r}; expected g1 or g2")


def predicted_signature(A: Algebra, which: str = "g1") -> Signature:
    """Vertex counts, degrees and edge count from the closed-form formulas.

    Only annihilator sizes, derived-set membership and adjoint preimage counts
    are used; no graph is built. The triangle field is left as None.
    """
    g2 = which.lower() in ("g2", "2")
    t = A.table
    q = A.size
    left_ann = np.zeros(q, dtype=bool)
    left_ann[A.left_annihilator_indices()] = True
    right_ann = np.zeros(q, dtype=bool)
    right_ann[A.right_annihilator_indices()] = True
    in_derived = np.zeros(q, dtype=bool)
    in_derived[A.derived_indices()] = True

    # |A \ Ann+({u})| = #{w : uw != 0};  |A \ Ann-({u})| = #{w : wu != 0}
    not_right_of_u = (t != 0).sum(axis=1)
    not_left_of_u = (t != 0).sum(axis=0)
    # sum_v |ad_v^{-1}(u)| = #{(v, w) : vw = u}
    preimages = np.bincount(t.ravel(), minlength=q)

    rows = [u for u in range(q) if not left_ann[u]]
    cols = [u for u in range(q) if not right_ann[u]]
    syms = [u for u in range(q) if in_derived[u] and u != 0]
    n_cells = int(q * q - preimages[0])

    d_r = [int(not_right_of_u[u]) for u in rows]
    d_c = [int(not_left_of_u[u]) for u in cols]
    d_s = [int(preimages[u]) for u in syms]
    edges = sum(d_r) + sum(d_c) + sum(d_s)
    if g2:
        d_r = [d + int(not right_ann[u]) + int(in_derived[u]) for d, u in zip(d_r, rows)]
        d_c = [d + int(not left_ann[u]) + int(in_derived[u]) for d, u in zip(d_c, cols)]
        d_s = [d + int(not left_ann[u]) + int(not right_ann[u]) for d, u in zip(d_s, syms)]
        # r_u c_u needs both vertices, i.e. u outside both one-sided annihilators
        edges += int(np.count_nonzero(~left_ann & ~right_ann))
        edges += int(np.count_nonzero(in_derived & ~left_ann))
        edges += int(np.count_nonzero(in_derived & ~right_ann))
    counts = {"R": len(rows), "C": len(cols), "S": len(syms), "T": n_cells}
    degs = {"R": d_r, "C": d_c, "S": d_s, "T": [3] * n_cells}
    present = sorted((c for c in COLORS if counts[c]), key=lambda c: ("str", c))
    return Signature(
        tuple((c, counts[c]) for c in present),
        edges,
        None,
        tuple((c, tuple(sorted(degs[c]))) for c in present),
    )


def vertex_tuple(sig: Signature) -> tuple[int, int, int, int]:
    return sig.vertex_tuple(COLORS)


# --- functoriality -------------------------------------------------------


def _index_map(A: Algebra, m) -> np.ndarray:
    """``out[idx]`` = index of the image under the matrix ``m`` of vector ``idx``."""
    return linalg.vector_indices(A.vectors @ np.asarray(m) % A.p, A.p)


def transport_isotopism_to_graph(A: Algebra, A2: Algebra, t: IsotopismTriple, which: str | None = None) -> dict[int, int]:
    """Graph isomorphism induced by an isotopism (G2 when ``f = g = h``).

    ``r_u -> r_f(u)``, ``c_u -> c_g(u)``, ``s_u -> s_h(u)``, ``t_uv -> t_f(u)g(v)``.
    """
    if not verify_isotopism(A, A2, t):
        raise NotAnIsotopism("triple is not an isotopism between the given algebras")
    if which is None:
        which = "g2" if t.is_isomorphism else "g1"
    if which == "g2" and not t.is_isomorphism:
        raise NotAnIsotopism("G2 transport requires an isomorphism (f = g = h)")
    G, H = build_graph(A, which), build_graph(A2, which)
    fm, gm, hm = (_index_map(A, x.matrix) for x in (t.f, t.g, t.h))
    vec, idx = A.vector, A.index
    alpha = {}
    for v, name in enumerate(G.names):
        kind = name[0]
        if kind == "r":
            image = ("r", vec(fm[idx(name[1])]))
        elif kind == "c":
            image = ("c", vec(gm[idx(name[1])]))
        elif kind == "s":
            image = ("s", vec(hm[idx(name[1])]))
        else:
            image = ("t", vec(fm[idx(name[1])]), vec(gm[idx(name[2])]))
        alpha[v] = H.vertex(image)
    assert is_isomorphism(G, H, alpha), "transported map is not a graph isomorphism"
    return alpha


@dataclass(frozen=True)
class ExtractedMaps:
    """Vector bijections recovered from a graph isomorphism (index arrays)."""

    f: tuple[int, ...]
    g: tuple[int, ...]
    h: tuple[int, ...]
    bijective: bool
    multiplicative: bool
    linear: bool

    def as_functions(self, A: Algebra):
        return tuple((lambda m: (lambda u: A.vector(m[A.index(u)])))(m) for m in (self.f, self.g, self.h))


def _complete(partial: dict[int, int], domain_rest, codomain_rest, size: int) -> list[int]:
    out = [-1] * size
    for a, b in partial.items():
        out[a] = b
    rest_a = sorted(domain_rest)
    rest_b = sorted(codomain_rest)
    if len(rest_a) != len(rest_b):
        raise NotAnIsotopism("completion regions differ in size")
    for a, b in zip(rest_a, rest_b):
        out[a] = b
    return out


def _is_linear(m: list[int], A: Algebra) -> bool:
    V, p = A.vectors, A.p
    img = V[np.array(m)]
    add_ok = all(
        np.array_equal(img[linalg.vector_indices((V + V[a]) % p, p)], (img + img[a]) % p) for a in range(A.size)
    )
    scal_ok = all(np.array_equal(img[linalg.vector_indices(V * s % p, p)], img * s % p) for s in range(p))
    return add_ok and scal_ok


def extract_maps_from_graph_iso(A: Algebra, A2: Algebra, alpha: dict[int, int], which: str = "g1") -> ExtractedMaps:
    """Recover ``f, g, h`` from a G1 (or G2) isomorphism.

    Outside the vertex-determined regions the maps are completed by the
    order-preserving bijection between the complementary vector sets (the
    coordinate identity whenever those sets coincide). For G2, a single map is
    read off r, c and s vertices together, so ``f = g = h``.
    """
    _check_compatible(A, A2)
    G, H = build_graph(A, which), build_graph(A2, which)
    if not is_isomorphism(G, H, alpha):
        raise NotAnIsotopism("alpha is not a color-preserving isomorphism")
    idx = A.index
    by_kind: dict[str, dict[int, int]] = {"r": {}, "c": {}, "s": {}}
    for v, name in enumerate(G.names):
        if name[0] in by_kind:
            by_kind[name[0]][idx(name[1])] = idx(H.names[alpha[v]][1])
    q = A.size
    universe = set(range(q))
    if which == "g2":
        merged: dict[int, int] = {}
        for kind in ("r", "c", "s"):
            for a, b in by_kind[kind].items():
                if merged.setdefault(a, b) != b:
                    raise NotAnIsotopism("G2 isomorphism does not induce a single map")
        f = _complete(merged, universe - set(merged), universe - set(merged.values()), q)
        g = h = f
    else:
        f = _complete(by_kind["r"], universe - set(by_kind["r"]), universe - set(by_kind["r"].values()), q)
        g = _complete(by_kind["c"], universe - set(by_kind["c"]), universe - set(by_kind["c"].values()), q)
        h = _complete(by_kind["s"], universe - set(by_kind["s"]), universe - set(by_kind["s"].values()), q)
    bij = all(len(set(m)) == q and -1 not in m for m in (f, g, h))
    t1, t2 = A.table, A2.table
    fa, ga, ha = np.array(f), np.array(g), np.array(h)
    mult = bool(np.array_equal(t2[fa[:, None], ga[None, :]], ha[t1]))
    lin = all(_is_linear(m, A) for m in (f, g, h))
    return ExtractedMaps(tuple(f), tuple(g), tuple(h), bij, mult, lin)
