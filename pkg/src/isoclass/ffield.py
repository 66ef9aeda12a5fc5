"""Arithmetic in the prime field F_p.

Residues are plain Python ints in ``[0, p)``; a :class:`PrimeField` carries the
modulus and provides the operations. Contexts are immutable and cached per
modulus.
"""

from __future__ import annotations

from functools import lru_cache

MAX_MODULUS = 1 << 16


class FieldError(ValueError):
    """Raised for invalid moduli and for division by zero."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    __slots__ = ("p", "_inv")

    def __init__(self, p: int):
        if not isinstance(p, int) or isinstance(p, bool):
            raise FieldError(f"modulus must be an int, got {p!r}")
        if not 2 <= p <= MAX_MODULUS:
            raise FieldError(f"modulus {p} outside supported range [2, {MAX_MODULUS}]")
        if not is_prime(p):
            raise FieldError(f"modulus {p} is not prime; only prime fields are supported")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "_inv", tuple([0] + [pow(a, p - 2, p) for a in range(1, p)]))

    def __setattr__(self, name, value):
        raise AttributeError("PrimeField is immutable")

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))

    def __reduce__(self):
        return (GF, (self.p,))

    @property
    def elements(self) -> range:
        return range(self.p)

    def elem(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return (a * self.inv(b)) % self.p

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a % self.p, e, self.p)


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    """Return the (cached) field context for the prime ``p``."""
    return PrimeField(p)
