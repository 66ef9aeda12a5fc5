"""Small dense linear algebra over F_p.

Matrices are numpy integer arrays with entries in ``[0, p)``. Everything here
is exact; row reduction uses modular inverses, never floating point.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .ffield import GF


def as_matrix(rows, p: int) -> np.ndarray:
    m = np.array(rows, dtype=np.int64) % p
    if m.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def row_reduce(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``m`` over F_p and its pivot columns."""
    F = GF(p)
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * F.inv(int(a[r, c]))) % p
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray, p: int) -> int:
    if np.size(m) == 0:
        return 0
    return len(row_reduce(m, p)[1])


def det(m: np.ndarray, p: int) -> int:
    """Determinant by Gaussian elimination."""
    F = GF(p)
    a = np.array(m, dtype=np.int64) % p
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    d = 1
    for c in range(n):
        nz = np.nonzero(a[c:, c])[0]
        if nz.size == 0:
            return 0
        k = c + int(nz[0])
        if k != c:
            a[[c, k]] = a[[k, c]]
            d = -d
        piv = int(a[c, c])
        d = (d * piv) % p
        inv = F.inv(piv)
        for i in range(c + 1, n):
            if a[i, c]:
                a[i] = (a[i] - (a[i, c] * inv % p) * a[c]) % p
    return d % p


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    aug = np.concatenate([np.array(m, dtype=np.int64) % p, identity(n)], axis=1)
    red, pivots = row_reduce(aug, p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return red[:, n:]


def nullspace_left(m: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : x @ m = 0}``."""
    rows = m.shape[0]
    red, pivots = row_reduce(np.array(m, dtype=np.int64).T, p)
    free = [c for c in range(rows) if c not in pivots]
    basis = []
    for fcol in free:
        x = np.zeros(rows, dtype=np.int64)
        x[fcol] = 1
        for r, pc in enumerate(pivots):
            x[pc] = (-red[r, fcol]) % p
        basis.append(x)
    if not basis:
        return np.zeros((0, rows), dtype=np.int64)
    return np.array(basis, dtype=np.int64)


def gl_order(n: int, p: int) -> int:
    out = 1
    for k in range(n):
        out *= p**n - p**k
    return out


@lru_cache(maxsize=None)
def general_linear_group(n: int, p: int) -> np.ndarray:
    """All invertible n x n matrices over F_p, shape (|GL|, n, n), lex order.

    Built row by row: row k ranges over vectors outside the span of rows < k.
    """
    vecs = all_vectors(n, p)
    out: list[np.ndarray] = []

    def extend(prefix: list[int], span: set[int]):
        if len(prefix) == n:
            out.append(vecs[prefix])
            return
        for idx in range(len(vecs)):
            if idx in span:
                continue
            new_span = set(span)
            v = vecs[idx]
            for s in span:
                for a in range(1, p):
                    new_span.add(vector_index((vecs[s] + a * v) % p, p))
            for a in range(1, p):
                new_span.add(vector_index((a * v) % p, p))
            extend(prefix + [idx], new_span)

    extend([], {0})
    arr = np.array(out, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def all_vectors(n: int, p: int) -> np.ndarray:
    """All of F_p^n in lexicographic order; row ``k`` has base-p digits of ``k``."""
    arr = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64).reshape(p ** n, n)
    arr.setflags(write=False)
    return arr


def vector_index(v, p: int) -> int:
    idx = 0
    for x in v:
        idx = idx * p + int(x)
    return idx


def vector_indices(vs: np.ndarray, p: int) -> np.ndarray:
    """Row-wise :func:`vector_index` for an array of shape (..., n)."""
    n = vs.shape[-1]
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (vs % p) @ weights


def leibniz_terms(n: int) -> list[tuple[int, tuple[int, ...]]]:
    """(sign, permutation) pairs of the Leibniz determinant expansion."""
    terms = []
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        terms.append((-1 if inversions % 2 else 1, perm))
    return terms
