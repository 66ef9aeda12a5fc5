"""Sparse multivariate polynomials over F_p.

A monomial is a packed int: variable ``i`` owns a ``width``-bit field whose top
bit is a guard. Multiplication is integer addition, divisibility a borrow-free
subtraction test. In a *field-reduced* ring every exponent ``e >= p`` is
replaced by ``e - (p - 1)`` after each product, which is the normal form
modulo the field equations ``x^p - x``; for p = 2 monomials are plain bitmasks.

The field layout depends on the order so that term comparison is a single int
comparison: lex packs the first variable highest, degrevlex packs the last
variable highest and prefixes the total degree.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from ..ffield import GF

ORDERS = ("degrevlex", "lex")


class PolyRing:
    def __init__(self, p: int, names: Iterable[str], order: str = "degrevlex", field_reduced: bool = False,
                 width: int | None = None):
        self.field = GF(p)
        self.p = p
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}; expected one of {ORDERS}")
        self.order = order
        self.field_reduced = field_reduced
        self.nvars = len(self.names)
        self.boolean = field_reduced and p == 2
        if self.boolean:
            width = 1
        elif width is None:
            width = (2 * p).bit_length() + 1 if field_reduced else 16
        self.width = width
        self.total_bits = width * self.nvars
        self.full = (1 << self.total_bits) - 1
        fmask = (1 << width) - 1
        if order == "lex":
            self.shifts = tuple(width * (self.nvars - 1 - i) for i in range(self.nvars))
        else:
            self.shifts = tuple(width * i for i in range(self.nvars))
        self.field_mask = fmask
        self.guard = 0 if self.boolean else sum(1 << (s + width - 1) for s in self.shifts)
        self.ones = sum(1 << s for s in self.shifts)
        if field_reduced and not self.boolean:
            self._bias = ((1 << (width - 1)) - p) * self.ones
        self.var_mono = tuple(1 << s for s in self.shifts)
        self._index = {nm: i for i, nm in enumerate(self.names)}
        self._keys: dict[int, int] = {}

    def __repr__(self) -> str:
        kind = ", field-reduced" if self.field_reduced else ""
        return f"PolyRing(F_{self.p}, {list(self.names)}, {self.order}{kind})"

    def with_options(self, order: str | None = None, field_reduced: bool | None = None) -> "PolyRing":
        return PolyRing(self.p, self.names, order or self.order,
                        self.field_reduced if field_reduced is None else field_reduced)

    # monomials ------------------------------------------------------------

    def mono(self, exps: Iterable[int]) -> int:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        m = 0
        for e, s in zip(exps, self.shifts):
            if e < 0:
                raise ValueError("negative exponent")
            if self.field_reduced:
                while e >= self.p:
                    e -= self.p - 1
            if e > self.field_mask >> (0 if self.boolean else 1):
                raise OverflowError(f"exponent {e} does not fit the monomial width")
            m |= e << s
        return m

    def exponents(self, m: int) -> tuple[int, ...]:
        return tuple((m >> s) & self.field_mask for s in self.shifts)

    def degree(self, m: int) -> int:
        if self.boolean:
            return m.bit_count()
        return sum((m >> s) & self.field_mask for s in self.shifts)

    def mul(self, a: int, b: int) -> int:
        if self.boolean:
            return a | b
        s = a + b
        if self.field_reduced:
            over = ((s + self._bias) & self.guard) >> (self.width - 1)
            return s - over * (self.p - 1)
        if s & self.guard:
            raise OverflowError("monomial exponent overflow")
        return s

    def divides(self, a: int, b: int) -> bool:
        if self.boolean:
            return a & ~b == 0
        return ((b | self.guard) - a) & self.guard == self.guard

    def quotient(self, b: int, a: int) -> int:
        """``b / a`` for ``a | b``."""
        return b & ~a if self.boolean else b - a

    def lcm(self, a: int, b: int) -> int:
        if self.boolean:
            return a | b
        out = 0
        for s in self.shifts:
            out |= max((a >> s) & self.field_mask, (b >> s) & self.field_mask) << s
        return out

    def coprime(self, a: int, b: int) -> bool:
        if self.boolean:
            return a & b == 0
        return all(not ((a >> s) & self.field_mask and (b >> s) & self.field_mask) for s in self.shifts)

    def key(self, m: int) -> int:
        """Sort key: ``key(a) < key(b)`` iff ``a < b`` in the monomial order."""
        k = self._keys.get(m)
        if k is None:
            if self.order == "lex":
                k = m
            else:
                k = (self.degree(m) << self.total_bits) | (self.full ^ m)
            self._keys[m] = k
        return k

    def support(self, m: int) -> list[int]:
        return [i for i, s in enumerate(self.shifts) if (m >> s) & self.field_mask]

    def format_mono(self, m: int) -> str:
        parts = []
        for nm, e in zip(self.names, self.exponents(m)):
            if e == 1:
                parts.append(nm)
            elif e:
                parts.append(f"{nm}^{e}")
        return "*".join(parts) if parts else "1"

    # polynomials -----------------------------------------------------------

    def __call__(self, terms: Mapping[int, int] | str | int) -> "Polynomial":
        if isinstance(terms, str):
            return self.parse(terms)
        if isinstance(terms, int):
            return Polynomial(self, {0: terms})
        return Polynomial(self, terms)

    def gen(self, name_or_index) -> "Polynomial":
        i = self._index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        return Polynomial(self, {self.var_mono[i]: 1})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {0: 1})

    def field_equation(self, i: int) -> "Polynomial":
        """``x_i^p - x_i`` (only meaningful in a ring that is not field-reduced)."""
        x = self.var_mono[i]
        return Polynomial(self, {self.mono([self.p if j == i else 0 for j in range(self.nvars)]): 1, x: -1})

    _TERM = re.compile(r"([+-]?)\s*([^+-]+)")

    def parse(self, text: str) -> "Polynomial":
        """Parse sums of terms like ``2*x^2*y - y + 1``."""
        text = text.replace(" ", "")
        if not text:
            raise ValueError("empty polynomial")
        terms: dict[int, int] = {}
        pos = 0
        for mt in self._TERM.finditer(text):
            if mt.start() != pos:
                raise ValueError(f"cannot parse {text!r}")
            pos = mt.end()
            sign = -1 if mt.group(1) == "-" else 1
            coef = 1
            m = 0
            for factor in mt.group(2).split("*"):
                if factor.isdigit():
                    coef *= int(factor)
                    continue
                nm, _, e = factor.partition("^")
                if nm not in self._index:
                    raise ValueError(f"unknown variable {nm!r}")
                x = self.var_mono[self._index[nm]]
                for _ in range(int(e) if e else 1):
                    m = self.mul(m, x)
            terms[m] = (terms.get(m, 0) + sign * coef) % self.p
        if pos != len(text):
            raise ValueError(f"cannot parse {text!r}")
        return Polynomial(self, terms)


class Polynomial:
    """Immutable polynomial: ``terms`` maps packed monomials to nonzero residues."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[int, int]):
        p = ring.p
        self.ring = ring
        self.terms = {m: c % p for m, c in terms.items() if c % p}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ring(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list[tuple[int, int]]:
        key = self.ring.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def lm(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=self.ring.key)

    def lc(self) -> int:
        return self.terms[self.lm()]

    def monic(self) -> "Polynomial":
        inv = self.ring.field.inv(self.lc())
        return Polynomial(self.ring, {m: c * inv for m, c in self.terms.items()})

    def is_constant(self) -> bool:
        return all(m == 0 for m in self.terms)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, int):
            return self.ring(other)
        if not isinstance(other, Polynomial) or other.ring is not self.ring:
            raise TypeError("polynomials from different rings")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        mul = self.ring.mul
        out: dict[int, int] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                m = mul(a, b)
                out[m] = out.get(m, 0) + ca * cb
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def evaluate(self, point) -> int:
        p = self.ring.p
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, self.ring.exponents(m)):
                if e:
                    v = v * pow(int(x), e, p) % p
            total += v
        return total % p

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            mono = self.ring.format_mono(m)
            if mono == "1":
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            out.append(body)
        return " + ".join(out)

    def __repr__(self) -> str:
        return f"Polynomial({self})"
