"""Exhaustive ground truth for isomorphisms, isotopisms and Lie algebra censuses.

Isotopisms are enumerated over pairs ``(f, g)`` of invertible matrices. For a
fixed pair the equations ``f(e_i) g(e_j) = h(e_i e_j)`` are linear in ``h``:
writing ``C`` for the n^2 x n matrix of structure constant rows ``c_ij`` of
``A`` and ``P`` for the rows ``f(e_i) g(e_j)`` computed in ``A'``, we need
``C H = P``. Solutions exist iff ``P`` vanishes on the left kernel of ``C``,
and ``H`` can be nonsingular iff ``P`` restricted to a row basis of ``C`` has
full rank; the nonsingular extensions off the span of the products are then
counted in closed form.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import linalg
from .ffield import is_prime
from .algebra import Algebra, IsotopismTriple, LinearMap, _check_compatible

DEFAULT_PAIR_BUDGET = 200_000_000
# F_3^3 has 3^9 alternating tensors; anything larger is out of reach here
LIE_CENSUS_LIMIT = 3 ** 9
CHUNK_ELEMENTS = 2_000_000


class Undecided(RuntimeError):
    """An exact engine gave up within its budget; no answer was produced."""


def pair_budget() -> int:
    env = os.environ.get("ISOCLASS_BUDGET")
    return int(env) if env else DEFAULT_PAIR_BUDGET


@dataclass(frozen=True)
class _HSystem:
    rank: int
    kernel: np.ndarray  # (n^2 - r, n^2)
    basis_rows: np.ndarray  # indices of r independent rows of C
    combos: np.ndarray  # nonzero coefficient vectors in F_p^r
    extensions: int  # nonsingular completions of H off span(C)


def _h_system(A: Algebra) -> _HSystem:
    p, n = A.p, A.n
    C = A.c.reshape(n * n, n)
    _, piv = linalg.row_reduce(C.T, p)
    r = len(piv)
    kernel = linalg.nullspace_left(C, p)
    combos = linalg.all_vectors(r, p)[1:] if r else np.zeros((0, 0), dtype=np.int64)
    ext = 1
    for k in range(r, n):
        ext *= p**n - p**k
    return _HSystem(r, kernel, np.array(piv, dtype=np.int64), combos, ext)


def _valid_pairs(A: Algebra, B: Algebra, F: np.ndarray, Gs: np.ndarray, hs: _HSystem) -> np.ndarray:
    """Boolean mask over ``Gs`` (for each ``F`` in the chunk) of solvable pairs."""
    p, n = A.p, A.n
    Q = np.einsum("fik,klm->film", F, B.c)
    P = np.einsum("gjl,film->fgijm", Gs, Q) % p
    P = P.reshape(F.shape[0], Gs.shape[0], n * n, n)
    ok = np.ones(P.shape[:2], dtype=bool)
    if hs.kernel.shape[0]:
        ok &= ~(np.einsum("ks,fgsm->fgkm", hs.kernel, P) % p).any(axis=(2, 3))
    if hs.rank:
        PI = P[:, :, hs.basis_rows, :]
        lin = np.einsum("cr,fgrm->fgcm", hs.combos, PI) % p
        ok &= (lin.any(axis=3)).all(axis=2)
    return ok


def _chunks(m: int, n: int):
    per = max(1, CHUNK_ELEMENTS // n**4)
    for start in range(0, m, per):
        yield start, min(m, start + per)


def _scan_isomorphisms(A: Algebra, B: Algebra, stop_at_first: bool):
    _check_compatible(A, B)
    p = A.p
    GL = linalg.general_linear_group(A.n, p)
    if len(GL) > pair_budget():
        raise Undecided(f"|GL({A.n},{p})| = {len(GL)} exceeds the search budget")
    for lo, hi in _chunks(len(GL), A.n):
        F = GL[lo:hi]
        lhs = np.einsum("fik,fjl,klm->fijm", F, F, B.c, optimize=True) % p
        rhs = np.einsum("ijs,fsm->fijm", A.c, F, optimize=True) % p
        for i in np.nonzero((lhs == rhs).all(axis=(1, 2, 3)))[0]:
            yield LinearMap(F[i], p)
            if stop_at_first:
                return


def enumerate_isomorphisms(A: Algebra, B: Algebra) -> list[LinearMap]:
    """All nonsingular ``f`` with ``f(e_i) f(e_j) = f(e_i e_j)``, lex order."""
    return list(_scan_isomorphisms(A, B, stop_at_first=False))


def count_isomorphisms(A: Algebra, B: Algebra) -> int:
    return len(enumerate_isomorphisms(A, B))


def _scan_isotopisms(A: Algebra, B: Algebra, stop_at_first: bool):
    _check_compatible(A, B)
    p, n = A.p, A.n
    GL = linalg.general_linear_group(n, p)
    m = len(GL)
    if m * m > pair_budget():
        raise Undecided(f"{m * m} pairs (f, g) exceed the search budget {pair_budget()}")
    hs = _h_system(A)
    per_f = max(1, CHUNK_ELEMENTS // max(1, m * n**3))
    for lo in range(0, m, per_f):
        F = GL[lo : lo + per_f]
        ok = _valid_pairs(A, B, F, GL, hs)
        fi, gi = np.nonzero(ok)
        for a, b in zip(fi, gi):
            yield GL[lo + a], GL[b], hs
            if stop_at_first:
                return


def count_isotopisms(A: Algebra, B: Algebra) -> int:
    """Number of isotopisms ``(f, g, h)`` from ``A`` to ``B``."""
    _check_compatible(A, B)
    p, n = A.p, A.n
    GL = linalg.general_linear_group(n, p)
    m = len(GL)
    if m * m > pair_budget():
        raise Undecided(f"{m * m} pairs (f, g) exceed the search budget {pair_budget()}")
    hs = _h_system(A)
    per_f = max(1, CHUNK_ELEMENTS // max(1, m * n**3))
    total = 0
    for lo in range(0, m, per_f):
        total += int(_valid_pairs(A, B, GL[lo : lo + per_f], GL, hs).sum())
    return total * hs.extensions


def _completions(A: Algebra, B: Algebra, F: np.ndarray, G: np.ndarray) -> list[np.ndarray]:
    p, n = A.p, A.n
    GL = linalg.general_linear_group(n, p)
    P = np.einsum("ik,jl,klm->ijm", F, G, B.c) % p
    CH = np.einsum("ijs,hsm->hijm", A.c, GL) % p
    return [GL[i] for i in np.nonzero((CH == P).all(axis=(1, 2, 3)))[0]]


def enumerate_isotopisms(A: Algebra, B: Algebra, count_only: bool = False):
    """All isotopisms from ``A`` to ``B`` (or just their number)."""
    if count_only:
        return count_isotopisms(A, B)
    out = []
    p = A.p
    for F, G, _ in _scan_isotopisms(A, B, stop_at_first=False):
        for H in _completions(A, B, F, G):
            out.append(IsotopismTriple(LinearMap(F, p), LinearMap(G, p), LinearMap(H, p)))
    return out


def _prefix_systems(A: Algebra):
    """For each prefix ``(a, b)``: kernel, row basis and combos of the rows ``c_ij``, i < a, j < b."""
    p, n = A.p, A.n
    out = {}
    for a in range(n + 1):
        for b in range(n + 1):
            rows = [(i, j) for i in range(a) for j in range(b)]
            if not rows:
                continue
            C = np.array([A.c[i, j] for i, j in rows], dtype=np.int64)
            _, piv = linalg.row_reduce(C.T, p)
            kernel = linalg.nullspace_left(C, p)
            combos = linalg.all_vectors(len(piv), p)[1:] if piv else np.zeros((0, 0), dtype=np.int64)
            out[a, b] = (rows, kernel, np.array(piv, dtype=np.int64), combos)
    return out


def backtrack_isotopisms(A: Algebra, B: Algebra, stop_at_first: bool = True, node_budget: int | None = None):
    """Depth-first search over ``f(e_1), g(e_1), f(e_2), ...`` with linear pruning.

    After each assignment the products ``f(e_i) g(e_j)`` fixed so far must
    satisfy every linear relation among the corresponding ``e_i e_j`` and have
    the same rank, as forced by ``h`` being linear and nonsingular. Yields
    isotopism triples; raises :class:`Undecided` past ``node_budget`` nodes.
    """
    _check_compatible(A, B)
    p, n = A.p, A.n
    budget = pair_budget() if node_budget is None else node_budget
    systems = _prefix_systems(A)
    V = linalg.all_vectors(n, p)
    nodes = 0
    F = np.zeros((n, n), dtype=np.int64)
    G = np.zeros((n, n), dtype=np.int64)
    levels = [(k, side) for k in range(n) for side in "fg"]

    def candidates(M, k):
        if k == 0:
            return V[1:]
        span = linalg.all_vectors(k, p) @ M[:k] % p
        taken = np.zeros(len(V), dtype=bool)
        taken[linalg.vector_indices(span, p)] = True
        return V[~taken]

    def feasible(cand, side, k):
        a, b = (k + 1, k) if side == "f" else (k + 1, k + 1)
        if (a, b) not in systems:
            return np.ones(len(cand), dtype=bool)
        rows, kernel, piv, combos = systems[a, b]
        fs = np.broadcast_to(F[:a], (len(cand), a, n)).copy()
        gs = np.broadcast_to(G[:b], (len(cand), b, n)).copy()
        if side == "f":
            fs[:, k] = cand
        else:
            gs[:, k] = cand
        P = np.stack([np.einsum("zk,zl,klm->zm", fs[:, i], gs[:, j], B.c) for i, j in rows], axis=1) % p
        ok = np.ones(len(cand), dtype=bool)
        if kernel.shape[0]:
            ok &= ~(np.einsum("ks,zsm->zkm", kernel, P) % p).any(axis=(1, 2))
        if len(piv):
            lin = np.einsum("cr,zrm->zcm", combos, P[:, piv]) % p
            ok &= lin.any(axis=2).all(axis=1)
        return ok

    def rec(level):
        nonlocal nodes
        if level == len(levels):
            for H in _completions(A, B, F, G):
                yield IsotopismTriple(LinearMap(F.copy(), p), LinearMap(G.copy(), p), LinearMap(H, p))
            return
        k, side = levels[level]
        M = F if side == "f" else G
        cand = candidates(M, k)
        cand = cand[feasible(cand, side, k)]
        for v in cand:
            nodes += 1
            if nodes > budget:
                raise Undecided(f"isotopism search exceeded {budget} nodes")
            M[k] = v
            yield from rec(level + 1)
        M[k] = 0

    for t in rec(0):
        yield t
        if stop_at_first:
            return


def find_isotopism(A: Algebra, B: Algebra) -> IsotopismTriple | None:
    """Some isotopism ``A -> B`` (found by backtracking), or None if none exists."""
    return next(backtrack_isotopisms(A, B, stop_at_first=True), None)


def find_isomorphism(A: Algebra, B: Algebra) -> LinearMap | None:
    return next(_scan_isomorphisms(A, B, stop_at_first=True), None)


# --- Lie algebras -------------------------------------------------------------


def enumerate_lie_algebras(n: int, p: int) -> list[Algebra]:
    """All alternating tensors on F_p^n satisfying the Jacobi identity.

    Free parameters are ``c_ij^k`` for ``i < j``; ``e_i e_i = 0`` and
    ``e_j e_i = -e_i e_j``. Output order is lexicographic in those parameters.
    """
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if not is_prime(p) or n < 1 or p ** (len(pairs) * n) > LIE_CENSUS_LIMIT:
        raise ValueError(f"Lie census on F_{p}^{n} is not supported "
                         f"(needs a prime field and at most {LIE_CENSUS_LIMIT} candidate tensors)")
    params = linalg.all_vectors(len(pairs) * n, p).reshape(p ** (len(pairs) * n), len(pairs), n)
    c = np.zeros((params.shape[0], n, n, n), dtype=np.int64)
    for t, (i, j) in enumerate(pairs):
        c[:, i, j, :] = params[:, t, :]
        c[:, j, i, :] = (-params[:, t, :]) % p
    # (e_a e_b) e_c, i.e. [[a,b],c]; Jacobi: [a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0
    left = np.einsum("zbcs,zasm->zabcm", c, c)  # e_a (e_b e_c)
    jac = left + np.transpose(left, (0, 2, 3, 1, 4)) + np.transpose(left, (0, 3, 1, 2, 4))
    ok = ~(jac % p).any(axis=(1, 2, 3, 4))
    return [Algebra(p, c[z]) for z in np.nonzero(ok)[0]]
