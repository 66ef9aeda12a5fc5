"""Vertex-colored undirected graphs.

Provides cheap isomorphism invariants (:func:`signature`), triangle counting
through the trace of the cubed adjacency matrix, and an exact canonical
labeling by individualization-refinement. Two graphs get equal
:func:`canonical_certificate` values exactly when a color-preserving
isomorphism exists.

The search refines with 1-dimensional Weisfeiler-Leman rounds, prunes with
the automorphisms it discovers (orbit pruning plus jumps back to the common
ancestor of automorphic leaves) and with a node invariant built from the
refinement trace, in the style of McKay's nauty.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

DEFAULT_NODE_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    """The search tree grew beyond the configured node budget."""


def _color_key(c) -> tuple[str, str]:
    return (type(c).__name__, str(c))


class ColoredGraph:
    """Immutable vertex-colored simple graph on vertices ``0..N-1``."""

    __slots__ = ("colors", "adj", "names", "_edges", "_name_index")

    def __init__(self, colors: Sequence[Hashable], edges: Iterable[tuple[int, int]], names: Sequence | None = None):
        colors = tuple(colors)
        n = len(colors)
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if v in nbrs[u]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        if names is not None and len(names) != n:
            raise ValueError("names must match the vertex count")
        self.colors = colors
        self.adj = tuple(tuple(sorted(s)) for s in nbrs)
        self.names = tuple(names) if names is not None else None
        self._edges = None
        self._name_index = None

    @property
    def order(self) -> int:
        return len(self.colors)

    def __len__(self) -> int:
        return len(self.colors)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        if self._edges is None:
            self._edges = tuple((u, v) for u in range(self.order) for v in self.adj[u] if u < v)
        return self._edges

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        # adjacency tuples are sorted
        lo, hi = 0, len(a)
        while lo < hi:
            mid = (lo + hi) // 2
            if a[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(a) and a[lo] == v

    def vertex(self, name) -> int:
        if self.names is None:
            raise KeyError("graph has no vertex names")
        if self._name_index is None:
            self._name_index = {nm: i for i, nm in enumerate(self.names)}
        return self._name_index[name]

    def color_classes(self) -> dict:
        out: dict = {}
        for v, c in enumerate(self.colors):
            out.setdefault(c, []).append(v)
        return out

    def count_color(self, color) -> int:
        return sum(1 for c in self.colors if c == color)

    def adjacency_matrix(self) -> np.ndarray:
        n = self.order
        m = np.zeros((n, n), dtype=np.int64)
        if self.edges:
            e = np.array(self.edges, dtype=np.int64)
            m[e[:, 0], e[:, 1]] = 1
            m[e[:, 1], e[:, 0]] = 1
        return m

    def relabeled(self, perm: Sequence[int]) -> "ColoredGraph":
        """Copy with vertex ``v`` renamed ``perm[v]``."""
        n = self.order
        colors = [None] * n
        names = [None] * n if self.names is not None else None
        for v in range(n):
            colors[perm[v]] = self.colors[v]
            if names is not None:
                names[perm[v]] = self.names[v]
        return ColoredGraph(colors, [(perm[u], perm[v]) for u, v in self.edges], names)

    def export(self) -> str:
        """One line per vertex: ``id color neighbor,neighbor,...``."""
        lines = []
        for v in range(self.order):
            label = f"{self.colors[v]}"
            if self.names is not None:
                label += f":{_fmt_name(self.names[v])}"
            lines.append(f"{v} {label} " + ",".join(map(str, self.adj[v])))
        return "\n".join(lines) + ("\n" if lines else "")


def _fmt_name(name) -> str:
    if isinstance(name, tuple):
        return "".join(_fmt_name(x) if isinstance(x, tuple) else str(x) for x in name)
    return str(name)


# --- invariants ------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    color_counts: tuple[tuple[str, int], ...]
    edges: int
    triangles: int | None
    degrees: tuple[tuple[str, tuple[int, ...]], ...]

    def count(self, color) -> int:
        return dict(self.color_counts).get(str(color), 0)

    def vertex_tuple(self, colors: Sequence = ("R", "C", "S", "T")) -> tuple[int, ...]:
        return tuple(self.count(c) for c in colors)

    def without_triangles(self) -> "Signature":
        return Signature(self.color_counts, self.edges, None, self.degrees)

    def to_json(self) -> dict:
        return {
            "vertices": dict(self.color_counts),
            "edges": self.edges,
            "triangles": self.triangles,
            "degrees": {c: list(d) for c, d in self.degrees},
        }


def signature(G: ColoredGraph, triangles: bool = True) -> Signature:
    classes = G.color_classes()
    keys = sorted(classes, key=_color_key)
    counts = tuple((str(c), len(classes[c])) for c in keys)
    degrees = tuple((str(c), tuple(sorted(G.degree(v) for v in classes[c]))) for c in keys)
    tri = triangle_count(G) if triangles else None
    return Signature(counts, G.edge_count, tri, degrees)


def triangle_count(G: ColoredGraph) -> int:
    """Number of triangles, as ``trace(M^3) / 6``."""
    tr = cube_trace(G)
    assert tr % 6 == 0
    return tr // 6


def cube_trace(G: ColoredGraph) -> int:
    if G.order == 0 or not G.edges:
        return 0
    m = G.adjacency_matrix().astype(bool)
    e = np.array(G.edges, dtype=np.int64)
    # trace(M^3) = sum_ij (M^2)_ij M_ji; only edges (i, j) contribute, each in both orientations
    return 2 * int(np.count_nonzero(m[e[:, 0]] & m[e[:, 1]]))


def enumerate_triangles(G: ColoredGraph) -> int:
    """Direct 3-clique count over edges; cross-check for :func:`triangle_count`."""
    nbr = [set(a) for a in G.adj]
    total = 0
    for u, v in G.edges:
        total += sum(1 for w in nbr[u] & nbr[v] if w > v)
    return total


# --- canonical labeling -------------------------------------------------------


def _equitable(adj, colors: list[int], ncolors: int) -> tuple[list[int], int, int]:
    """Refine ``colors`` (0..ncolors-1, order-significant) to an equitable coloring.

    Returns the new colors, their count and a hash of the refinement trace.
    Cells split in place: a vertex's new color sorts first by its old color.
    """
    trace = 0
    n = len(colors)
    while True:
        sigs = [(colors[v], tuple(sorted([colors[w] for w in adj[v]]))) for v in range(n)]
        uniq = sorted(set(sigs))
        trace = hash((trace, ncolors, len(uniq), hash(tuple(uniq))))
        if len(uniq) == ncolors:
            return colors, ncolors, trace
        rank = {s: i for i, s in enumerate(uniq)}
        colors = [rank[s] for s in sigs]
        ncolors = len(uniq)


def _shape(colors: list[int], ncolors: int) -> tuple[int, ...]:
    cnt = Counter(colors)
    return tuple(cnt[c] for c in range(ncolors))


class _Search:
    def __init__(self, G: ColoredGraph, budget: int):
        self.G = G
        self.adj = G.adj
        self.n = G.order
        self.budget = budget
        self.nodes = 0
        self.gens: list[tuple[int, ...]] = []
        self.first = None  # (traces, code, lab, prefix)
        self.best = None

    def initial_colors(self) -> tuple[list[int], int]:
        keys = sorted(set(self.G.colors), key=_color_key)
        rk = {c: i for i, c in enumerate(keys)}
        return [rk[c] for c in self.G.colors], len(keys)

    def leaf_code(self, colors: list[int]) -> tuple[tuple[int, ...], tuple]:
        lab = [0] * self.n
        for v, c in enumerate(colors):
            lab[c] = v
        code = tuple(sorted((min(colors[u], colors[v]), max(colors[u], colors[v])) for u, v in self.G.edges))
        return tuple(lab), code

    def run(self):
        colors, k = self.initial_colors()
        colors, k, tr = _equitable(self.adj, colors, k)
        self.search(colors, k, [], [(tr, _shape(colors, k))])
        return self.best

    def _orbits(self, prefix: list[int]) -> list[int]:
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.gens:
            if all(g[v] == v for v in prefix):
                for v in range(self.n):
                    a, b = find(v), find(g[v])
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        return [find(v) for v in range(self.n)]

    def search(self, colors, k, prefix, traces) -> int:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"canonical labeling exceeded {self.budget} search nodes")
        depth = len(prefix)
        if k == self.n:
            return self.leaf(colors, prefix, traces)
        # target cell: first smallest non-singleton cell
        sizes = _shape(colors, k)
        target = min((s, c) for c, s in enumerate(sizes) if s > 1)[1]
        cell = sorted(v for v in range(self.n) if colors[v] == target)
        done: list[int] = []
        for v in cell:
            if done:
                orb = self._orbits(prefix)
                if any(orb[v] == orb[w] for w in done):
                    continue
            child = [2 * c + (1 if c == target and u != v else 0) for u, c in enumerate(colors)]
            ranks = {c: i for i, c in enumerate(sorted(set(child)))}
            child = [ranks[c] for c in child]
            ccol, ck, tr = _equitable(self.adj, child, k + 1)
            t = traces + [(tr, _shape(ccol, ck))]
            done.append(v)
            if not self._worth(t):
                continue
            back = self.search(ccol, ck, prefix + [v], t)
            if back < depth:
                return back
        return self.n + 1

    def _worth(self, traces) -> bool:
        d = len(traces)
        if self.first is not None and self.first[0][:d] == traces:
            return True
        if self.best is None:
            return True
        return traces >= self.best[0][:d]

    def leaf(self, colors, prefix, traces) -> int:
        lab, code = self.leaf_code(colors)
        rec = (traces, code, lab, list(prefix))
        if self.first is None:
            self.first = rec
            self.best = rec
            return self.n + 1
        for other in (self.first, self.best):
            if other[0] == traces and other[1] == code:
                if other[2] != lab:
                    gamma = [0] * self.n
                    for a, b in zip(other[2], lab):
                        gamma[a] = b
                    self.gens.append(tuple(gamma))
                return _common_prefix(other[3], prefix)
        if (traces, code) > (self.best[0], self.best[1]):
            self.best = rec
        return self.n + 1


def _common_prefix(a: list[int], b: list[int]) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


@dataclass(frozen=True)
class CanonicalForm:
    certificate: bytes
    labeling: tuple[int, ...]  # labeling[k] = vertex placed at canonical position k
    automorphism_generators: tuple[tuple[int, ...], ...]
    nodes: int


def canonical_form(G: ColoredGraph, budget: int = DEFAULT_NODE_BUDGET) -> CanonicalForm:
    if G.order == 0:
        return CanonicalForm(_encode((), (), ()), (), (), 0)
    s = _Search(G, budget)
    traces, code, lab, _ = s.run()
    colors = tuple(str(G.colors[v]) for v in lab)
    return CanonicalForm(_encode(colors, code, traces), lab, tuple(s.gens), s.nodes)


def _encode(colors, code, traces) -> bytes:
    h = hashlib.sha256()
    h.update(repr((len(colors), colors, code)).encode())
    return h.digest() + repr((colors, code)).encode()


def canonical_certificate(G: ColoredGraph, budget: int = DEFAULT_NODE_BUDGET) -> bytes:
    """Byte string equal for two graphs iff they are color-isomorphic."""
    return canonical_form(G, budget).certificate


def find_isomorphism(G: ColoredGraph, H: ColoredGraph, budget: int = DEFAULT_NODE_BUDGET) -> dict[int, int] | None:
    """A color-preserving isomorphism ``G -> H`` as a vertex dict, or None."""
    if G.order != H.order or signature(G, triangles=False) != signature(H, triangles=False):
        return None
    cg = canonical_form(G, budget)
    ch = canonical_form(H, budget)
    if cg.certificate != ch.certificate:
        return None
    iso = {a: b for a, b in zip(cg.labeling, ch.labeling)}
    assert is_isomorphism(G, H, iso)
    return iso


def is_isomorphism(G: ColoredGraph, H: ColoredGraph, iso: dict[int, int]) -> bool:
    """Check that ``iso`` is a color-preserving bijection mapping edges onto edges."""
    if G.order != H.order or len(iso) != G.order or set(iso) != set(range(G.order)):
        return False
    if set(iso.values()) != set(range(H.order)):
        return False
    if any(G.colors[v] != H.colors[iso[v]] for v in range(G.order)):
        return False
    if G.edge_count != H.edge_count:
        return False
    return all(H.has_edge(iso[u], iso[v]) for u, v in G.edges)


def brute_force_isomorphic(G: ColoredGraph, H: ColoredGraph) -> bool:
    """Exhaustive check for tiny graphs; test oracle only."""
    from itertools import permutations

    if G.order != H.order:
        return False
    verts = list(range(G.order))
    for perm in permutations(verts):
        if is_isomorphism(G, H, dict(zip(verts, perm))):
            return True
    return False


def triangle_free(G: ColoredGraph) -> bool:
    return triangle_count(G) == 0


def complete_graph(n: int, color="x") -> ColoredGraph:
    return ColoredGraph([color] * n, combinations(range(n), 2))
