"""Partial Latin squares, their isotopy classes and partial quasigroup rings.

Text format: rows written one after another, separated by spaces, with 0
for an empty cell (``"120 210 000"``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import Algebra, IsotopismTriple, LinearMap
from .colorgraph import ColoredGraph

MAX_ORDER = 3


class LatinError(ValueError):
    pass


@dataclass(frozen=True)
class PartialLatinSquare:
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.cells)
        if any(len(r) != n for r in self.cells):
            raise LatinError("a partial Latin square must be square")
        for r in self.cells:
            if any(not 0 <= x <= n for x in r):
                raise LatinError(f"symbols must lie in 0..{n}")
        for line in list(self.cells) + list(zip(*self.cells)):
            filled = [x for x in line if x]
            if len(filled) != len(set(filled)):
                raise LatinError(f"symbol repeated in a row or column of {format_pls(self)!r}")

    @property
    def n(self) -> int:
        return len(self.cells)

    def filled(self) -> int:
        return sum(1 for r in self.cells for x in r if x)

    def entries(self):
        """Filled cells as 0-based ``(i, j, symbol)`` with 1-based symbols."""
        for i, r in enumerate(self.cells):
            for j, x in enumerate(r):
                if x:
                    yield i, j, x

    def __str__(self) -> str:
        return format_pls(self)


def parse_pls(text: str, n: int | None = None) -> PartialLatinSquare:
    rows = text.split()
    if n is None:
        n = len(rows)
    if len(rows) != n or any(len(r) != n or not r.isdigit() for r in rows):
        raise LatinError(f"malformed partial Latin square {text!r} (expected {n} rows of {n} digits)")
    return PartialLatinSquare(tuple(tuple(int(ch) for ch in r) for r in rows))


def format_pls(L: PartialLatinSquare) -> str:
    return " ".join("".join(str(x) for x in r) for r in L.cells)


@dataclass(frozen=True)
class PermTriple:
    """Row, column and symbol permutations of ``0..n-1`` (tuples of images)."""

    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    gamma: tuple[int, ...]

    def __post_init__(self):
        n = len(self.alpha)
        for perm in (self.alpha, self.beta, self.gamma):
            if sorted(perm) != list(range(n)):
                raise LatinError(f"{perm!r} is not a permutation of 0..{n - 1}")

    @classmethod
    def identity(cls, n: int) -> "PermTriple":
        e = tuple(range(n))
        return cls(e, e, e)

    def compose(self, first: "PermTriple") -> "PermTriple":
        """``self o first``: apply ``first``, then ``self``."""
        return PermTriple(*(tuple(b[a[i]] for i in range(len(a))) for a, b in zip(
            (first.alpha, first.beta, first.gamma), (self.alpha, self.beta, self.gamma))))


def act(t: PermTriple, L: PartialLatinSquare) -> PartialLatinSquare:
    """Image square: cell ``(alpha(i), beta(j))`` holds ``gamma(l_ij)``."""
    n = L.n
    out = [[0] * n for _ in range(n)]
    for i, j, x in L.entries():
        out[t.alpha[i]][t.beta[j]] = t.gamma[x - 1] + 1
    return PartialLatinSquare(tuple(tuple(r) for r in out))


def _sort_key(L: PartialLatinSquare) -> tuple[int, ...]:
    # empty cells sort after every symbol, so representatives start "1..."
    n = L.n
    return tuple(x if x else n + 1 for r in L.cells for x in r)


def all_perm_triples(n: int):
    perms = list(itertools.permutations(range(n)))
    for a in perms:
        for b in perms:
            for c in perms:
                yield PermTriple(a, b, c)


def canonical_pls(L: PartialLatinSquare) -> PartialLatinSquare:
    """Least element of the isotopy orbit of ``L`` (empty cells ordered last)."""
    return min((act(t, L) for t in all_perm_triples(L.n)), key=_sort_key)


def all_pls(n: int):
    """Every partial Latin square of order ``n`` (row-wise with pruning)."""
    if not 1 <= n <= MAX_ORDER:
        raise LatinError(f"order {n} unsupported (1..{MAX_ORDER})")
    cells = [(i, j) for i in range(n) for j in range(n)]
    grid = [[0] * n for _ in range(n)]

    def rec(k: int):
        if k == len(cells):
            yield PartialLatinSquare(tuple(tuple(r) for r in grid))
            return
        i, j = cells[k]
        used = set(grid[i][:j]) | {grid[r][j] for r in range(i)}
        for x in range(n + 1):
            if x and x in used:
                continue
            grid[i][j] = x
            yield from rec(k + 1)
        grid[i][j] = 0

    yield from rec(0)


@lru_cache(maxsize=None)
def pls_isotopism_classes(n: int) -> tuple[PartialLatinSquare, ...]:
    """One canonical representative per isotopy class, sorted by representative."""
    if not 1 <= n <= MAX_ORDER:
        raise LatinError(f"order {n} unsupported (1..{MAX_ORDER})")
    seen: set = set()
    reps = []
    triples = list(all_perm_triples(n))
    for L in all_pls(n):
        if L in seen:
            continue
        orbit = {act(t, L) for t in triples}
        seen |= orbit
        reps.append(min(orbit, key=_sort_key))
    return tuple(sorted(reps, key=_sort_key))


def class_index(n: int) -> dict[PartialLatinSquare, PartialLatinSquare]:
    """Map every PLS of order ``n`` to its canonical representative."""
    out = {}
    for rep in pls_isotopism_classes(n):
        for t in all_perm_triples(n):
            out[act(t, rep)] = rep
    return out


def ring_of(L: PartialLatinSquare, p: int) -> Algebra:
    """Partial quasigroup ring: ``e_i e_j = e_{l_ij}`` on filled cells."""
    n = L.n
    c = np.zeros((n, n, n), dtype=np.int64)
    for i, j, x in L.entries():
        c[i, j, x - 1] = 1
    return Algebra(p, c)


def _perm_matrix(perm, p: int) -> LinearMap:
    n = len(perm)
    m = np.zeros((n, n), dtype=np.int64)
    for i, j in enumerate(perm):
        m[i, j] = 1
    return LinearMap(m, p)


def lift_magma_isotopism(t: PermTriple, p: int) -> IsotopismTriple:
    """Permutation matrices with ``e_i -> e_{alpha(i)}`` etc."""
    return IsotopismTriple(_perm_matrix(t.alpha, p), _perm_matrix(t.beta, p), _perm_matrix(t.gamma, p))


def mckay_graph(L: PartialLatinSquare) -> ColoredGraph:
    """Row/column/symbol/cell graph; cell vertices only for filled cells."""
    n = L.n
    colors = ["R"] * n + ["C"] * n + ["S"] * n
    names = [("r", i + 1) for i in range(n)] + [("c", i + 1) for i in range(n)] + [("s", i + 1) for i in range(n)]
    edges = []
    for i, j, x in L.entries():
        tv = len(colors)
        colors.append("T")
        names.append(("t", i + 1, j + 1))
        edges += [(i, tv), (n + j, tv), (2 * n + x - 1, tv)]
    return ColoredGraph(colors, edges, names)
