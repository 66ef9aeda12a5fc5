"""Finite-dimensional algebras over F_p given by structure constants.

An :class:`Algebra` stores the dense tensor ``c[i, j, k]`` with
``e_i e_j = sum_k c[i, j, k] e_k`` (0-based indices internally, 1-based in the
text format). Vectors are coordinate tuples; when whole-space scans are needed,
vectors are identified with their index in the lexicographic enumeration of
F_p^n (see :func:`isoclass.linalg.all_vectors`).

Linear maps act on row vectors: ``alpha(e_i) = sum_j M[i, j] e'_j``, so the
image of ``u`` is ``u @ M``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .ffield import GF

MAX_DIM = 4

Vector = tuple[int, ...]


class DimensionError(ValueError):
    pass


class SingularMapError(ValueError):
    pass


class LinearMap:
    """An n x n matrix over F_p acting by ``u -> u @ matrix``."""

    __slots__ = ("matrix", "p")

    def __init__(self, matrix, p: int):
        m = linalg.as_matrix(matrix, p)
        if m.shape[0] != m.shape[1]:
            raise DimensionError("linear maps must be square")
        m.setflags(write=False)
        self.matrix = m
        self.p = p

    @classmethod
    def identity(cls, n: int, p: int) -> "LinearMap":
        return cls(linalg.identity(n), p)

    @classmethod
    def from_images(cls, images: Sequence[Sequence[int]], p: int) -> "LinearMap":
        """Map sending ``e_i`` to ``images[i]``."""
        return cls(images, p)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, u) -> Vector:
        return tuple(int(x) for x in (np.asarray(u, dtype=np.int64) @ self.matrix) % self.p)

    def det(self) -> int:
        return linalg.det(self.matrix, self.p)

    def is_singular(self) -> bool:
        return self.det() == 0

    def inverse(self) -> "LinearMap":
        return LinearMap(linalg.inverse(self.matrix, self.p), self.p)

    def then(self, other: "LinearMap") -> "LinearMap":
        """Composition ``other o self``."""
        return LinearMap(self.matrix @ other.matrix, self.p)

    def as_tuple(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in row) for row in self.matrix)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearMap) and self.p == other.p and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash((self.p, self.as_tuple()))

    def __repr__(self) -> str:
        return f"LinearMap({[list(r) for r in self.as_tuple()]}, p={self.p})"


@dataclass(frozen=True)
class IsotopismTriple:
    f: LinearMap
    g: LinearMap
    h: LinearMap

    @classmethod
    def identity(cls, n: int, p: int) -> "IsotopismTriple":
        e = LinearMap.identity(n, p)
        return cls(e, e, e)

    @classmethod
    def diagonal(cls, f: LinearMap) -> "IsotopismTriple":
        return cls(f, f, f)

    @property
    def is_isomorphism(self) -> bool:
        return self.f == self.g == self.h

    def is_nonsingular(self) -> bool:
        return not (self.f.is_singular() or self.g.is_singular() or self.h.is_singular())

    def then(self, other: "IsotopismTriple") -> "IsotopismTriple":
        """Apply ``self`` (A -> B), then ``other`` (B -> C)."""
        return IsotopismTriple(self.f.then(other.f), self.g.then(other.g), self.h.then(other.h))

    def inverse(self) -> "IsotopismTriple":
        return IsotopismTriple(self.f.inverse(), self.g.inverse(), self.h.inverse())

    def to_json(self) -> dict:
        return {"f": self.f.as_tuple(), "g": self.g.as_tuple(), "h": self.h.as_tuple()}

    @classmethod
    def from_json(cls, data: dict, p: int) -> "IsotopismTriple":
        return cls(LinearMap(data["f"], p), LinearMap(data["g"], p), LinearMap(data["h"], p))


class Algebra:
    """Algebra over F_p with dense structure constants ``c[i, j, k]``."""

    __slots__ = ("p", "n", "c", "__dict__")

    def __init__(self, p: int, c):
        GF(p)
        c = np.array(c, dtype=np.int64) % p
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise DimensionError(f"structure tensor must be n x n x n, got shape {c.shape}")
        if not 1 <= c.shape[0] <= MAX_DIM:
            raise DimensionError(f"dimension {c.shape[0]} unsupported (1..{MAX_DIM})")
        c.setflags(write=False)
        self.p = p
        self.n = c.shape[0]
        self.c = c

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, n: int, p: int) -> "Algebra":
        return cls(p, np.zeros((n, n, n), dtype=np.int64))

    @classmethod
    def from_products(cls, p: int, dim: int, products: Iterable[Sequence[int]]) -> "Algebra":
        """Build from 1-based quadruples ``(i, j, k, c)`` meaning ``c_ij^k = c``."""
        c = np.zeros((dim, dim, dim), dtype=np.int64)
        for quad in products:
            if len(quad) != 4:
                raise ValueError(f"product entry must be [i, j, k, c], got {quad!r}")
            i, j, k, val = (int(x) for x in quad)
            if not all(1 <= x <= dim for x in (i, j, k)):
                raise DimensionError(f"index out of range in {quad!r} for dim {dim}")
            c[i - 1, j - 1, k - 1] = val % p
        return cls(p, c)

    @classmethod
    def from_json(cls, data: dict | str) -> "Algebra":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls.from_products(int(data["p"]), int(data["dim"]), data.get("products", []))
        except KeyError as exc:
            raise ValueError(f"algebra record missing field {exc}") from None

    def to_json(self) -> dict:
        prods = [
            [i + 1, j + 1, k + 1, int(self.c[i, j, k])]
            for i in range(self.n)
            for j in range(self.n)
            for k in range(self.n)
            if self.c[i, j, k]
        ]
        return {"p": self.p, "dim": self.n, "products": prods}

    # identity -----------------------------------------------------------

    def key(self) -> str:
        """Structure-constant string, used for deterministic ordering."""
        return "".join(str(int(x)) for x in self.c.ravel()) if self.p < 10 else ",".join(
            str(int(x)) for x in self.c.ravel()
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Algebra) and self.p == other.p and np.array_equal(self.c, other.c)

    def __hash__(self) -> int:
        return hash((self.p, self.c.tobytes()))

    def __repr__(self) -> str:
        return f"Algebra(p={self.p}, dim={self.n}, {describe(self)})"

    def is_abelian(self) -> bool:
        return not self.c.any()

    # products -----------------------------------------------------------

    def product(self, u, v) -> Vector:
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.shape != (self.n,) or v.shape != (self.n,):
            raise DimensionError(f"vectors must have length {self.n}")
        return tuple(int(x) for x in np.einsum("i,j,ijk->k", u, v, self.c) % self.p)

    @cached_property
    def size(self) -> int:
        return self.p**self.n

    @cached_property
    def vectors(self) -> np.ndarray:
        return linalg.all_vectors(self.n, self.p)

    @cached_property
    def table(self) -> np.ndarray:
        """``table[a, b]`` = index of the product of vectors ``a`` and ``b``."""
        V = self.vectors
        prods = np.einsum("ai,bj,ijk->abk", V, V, self.c) % self.p
        t = linalg.vector_indices(prods, self.p)
        t.setflags(write=False)
        return t

    def vector(self, idx: int) -> Vector:
        return tuple(int(x) for x in self.vectors[idx])

    def index(self, u) -> int:
        return linalg.vector_index(u, self.p)

    # annihilators and derived set ----------------------------------------

    def _indices(self, S) -> np.ndarray:
        if S is None:
            return np.arange(self.size)
        return np.array(sorted({self.index(s) for s in S}), dtype=np.int64)

    def left_annihilator_indices(self, S=None) -> np.ndarray:
        cols = self._indices(S)
        if cols.size == 0:
            return np.arange(self.size)
        return np.nonzero((self.table[:, cols] == 0).all(axis=1))[0]

    def right_annihilator_indices(self, S=None) -> np.ndarray:
        rows = self._indices(S)
        if rows.size == 0:
            return np.arange(self.size)
        return np.nonzero((self.table[rows, :] == 0).all(axis=0))[0]

    def left_annihilator(self, S=None) -> set[Vector]:
        """``{u : uv = 0 for all v in S}``; ``S=None`` means the whole algebra."""
        return {self.vector(i) for i in self.left_annihilator_indices(S)}

    def right_annihilator(self, S=None) -> set[Vector]:
        return {self.vector(i) for i in self.right_annihilator_indices(S)}

    def annihilator(self, S=None) -> set[Vector]:
        return self.left_annihilator(S) & self.right_annihilator(S)

    def derived_indices(self, span: bool = False) -> np.ndarray:
        prods = np.unique(self.table)
        if not span:
            return prods
        basis = self.vectors[prods]
        red, piv = linalg.row_reduce(basis, self.p) if len(basis) else (basis, [])
        rows = red[: len(piv)]
        if not len(rows):
            return np.array([0], dtype=np.int64)
        coeffs = linalg.all_vectors(len(rows), self.p)
        return np.unique(linalg.vector_indices(coeffs @ rows, self.p))

    def derived_set(self, span: bool = False) -> set[Vector]:
        """The set of all products ``uv``; with ``span=True`` its linear span."""
        return {self.vector(i) for i in self.derived_indices(span)}

    def adjoint_preimage_size(self, v, u) -> int:
        """``|{w : vw = u}|``."""
        return int(np.count_nonzero(self.table[self.index(v)] == self.index(u)))

    # isotopisms -----------------------------------------------------------

    def transported(self, t: IsotopismTriple) -> "Algebra":
        return apply_isotopism(self, t)


def _check_compatible(A: Algebra, B: Algebra) -> None:
    if A.p != B.p or A.n != B.n:
        raise DimensionError(f"algebras differ in field or dimension: (p={A.p}, n={A.n}) vs (p={B.p}, n={B.n})")


def _check_triple(t: IsotopismTriple, n: int, p: int) -> None:
    for m in (t.f, t.g, t.h):
        if m.p != p or m.n != n:
            raise DimensionError("isotopism maps do not match the algebra")


def apply_isotopism(A: Algebra, t: IsotopismTriple) -> Algebra:
    """The algebra ``A'`` on the same space with ``u o v = h(f^-1(u) g^-1(v))``.

    By construction ``t`` is an isotopism from ``A`` to ``A'``.
    """
    _check_triple(t, A.n, A.p)
    if not t.is_nonsingular():
        raise SingularMapError("isotopism contains a singular map")
    p = A.p
    Fi = linalg.inverse(t.f.matrix, p)
    Gi = linalg.inverse(t.g.matrix, p)
    c2 = np.einsum("ia,jb,abs,sk->ijk", Fi, Gi, A.c, t.h.matrix) % p
    return Algebra(p, c2)


def basis_equations_hold(A: Algebra, B: Algebra, F, G, H) -> bool:
    """``f(e_i) g(e_j) == h(e_i e_j)`` for all basis pairs (matrices given)."""
    p = A.p
    lhs = np.einsum("ik,jl,klm->ijm", F, G, B.c) % p
    rhs = np.einsum("ijs,sm->ijm", A.c, H) % p
    return bool(np.array_equal(lhs, rhs))


def verify_isotopism(A: Algebra, B: Algebra, t: IsotopismTriple) -> bool:
    """True iff ``t`` is a nonsingular triple with ``f(u)g(v) = h(uv)``."""
    _check_compatible(A, B)
    _check_triple(t, A.n, A.p)
    if not t.is_nonsingular():
        return False
    return basis_equations_hold(A, B, t.f.matrix, t.g.matrix, t.h.matrix)


def verify_isomorphism(A: Algebra, B: Algebra, f: LinearMap) -> bool:
    return verify_isotopism(A, B, IsotopismTriple.diagonal(f))


def describe(A: Algebra) -> str:
    """Human-readable product list, e.g. ``e1e2=e3, e1e3=2e2``."""
    parts = []
    for i in range(A.n):
        for j in range(A.n):
            terms = []
            for k in range(A.n):
                c = int(A.c[i, j, k])
                if c:
                    terms.append(f"e{k + 1}" if c == 1 else f"{c}e{k + 1}")
            if terms:
                parts.append(f"e{i + 1}e{j + 1}=" + "+".join(terms))
    return ", ".join(parts) if parts else "abelian"


def alternating_from_products(p: int, dim: int, text: str) -> Algebra:
    """Alternating algebra from a description like ``"e1e2=e2, e1e3=-e3, e2e3=2e1"``.

    Each listed product ``e_i e_j`` (i < j) fixes ``e_j e_i`` by antisymmetry;
    unlisted products and all squares are zero.
    """
    c = np.zeros((dim, dim, dim), dtype=np.int64)
    text = text.strip()
    if text and text.lower() != "abelian":
        for item in text.split(","):
            lhs, rhs = item.strip().split("=")
            lhs = lhs.strip()
            if not (lhs.startswith("e") and lhs.count("e") == 2):
                raise ValueError(f"bad product {item!r}")
            i, j = (int(x) - 1 for x in lhs[1:].split("e"))
            for coef, k in _parse_linear(rhs):
                c[i, j, k] = (c[i, j, k] + coef) % p
                c[j, i, k] = (c[j, i, k] - coef) % p
    return Algebra(p, c)


def _parse_linear(text: str) -> list[tuple[int, int]]:
    text = text.replace(" ", "").replace("-", "+-")
    out = []
    for term in filter(None, text.split("+")):
        coef_s, _, idx_s = term.partition("e")
        if coef_s in ("", "+"):
            coef = 1
        elif coef_s == "-":
            coef = -1
        else:
            coef = int(coef_s)
        out.append((coef, int(idx_s) - 1))
    return out
