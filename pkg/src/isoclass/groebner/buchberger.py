"""Normal forms, Buchberger's algorithm and zero-dimensional counting.

Polynomials are handled internally as plain ``{monomial: coeff}`` dicts over
one :class:`PolyRing`. In a field-reduced ring the field equations are implicit
and the extra S-pairs ``x^(p-e) g`` (for ``x^e`` exactly dividing the leading
monomial of ``g``) are processed alongside the ordinary ones, so the result
together with the missing ``x^p - x`` is a Groebner basis of the ideal plus
the field equations.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache

from .poly import Polynomial, PolyRing

DEFAULT_PAIR_BUDGET = 200_000


class GroebnerBudgetExceeded(RuntimeError):
    """Raised when Buchberger's algorithm exceeds its pair or size budget."""


class NotZeroDimensional(ValueError):
    pass


@dataclass
class GBStats:
    pairs: int = 0
    zero_reductions: int = 0
    product_skips: int = 0
    chain_skips: int = 0
    field_pairs: int = 0
    basis_peak: int = 0


@dataclass
class GroebnerBasis:
    ring: PolyRing
    polys: list[Polynomial]
    stats: GBStats = field(default_factory=GBStats)

    def leading_monomials(self) -> list[int]:
        return [g.lm() for g in self.polys]

    def is_unit(self) -> bool:
        return any(g.is_constant() and g for g in self.polys)

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.polys)

    def contains(self, f: Polynomial) -> bool:
        return not self.reduce(f)

    def with_field_equations(self) -> list[Polynomial]:
        """The basis over the full polynomial ring (adds the needed ``x^p - x``)."""
        R = self.ring
        if not R.field_reduced:
            return list(self.polys)
        if self.is_unit():
            return list(self.polys)
        full = R.with_options(field_reduced=False)
        out = [_transfer(g, full) for g in self.polys]
        lms = self.leading_monomials()
        for i, x in enumerate(R.var_mono):
            pure = any(m and R.support(m) == [i] for m in lms)
            if not pure:
                out.append(full.field_equation(i))
        key = full.key
        return sorted(out, key=lambda g: key(g.lm()))

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)


def _transfer(f: Polynomial, target: PolyRing) -> Polynomial:
    src = f.ring
    return Polynomial(target, {target.mono(src.exponents(m)): c for m, c in f.terms.items()})


# --- reduction -----------------------------------------------------------------


class _Reducers:
    """Division candidates bucketed by the lowest variable of their leading monomial."""

    def __init__(self, R: PolyRing, entries=()):
        self.R = R
        self.buckets: dict[int, list] = {}
        self.unit = None
        for e in entries:
            self.add(e)

    def _low(self, lm: int) -> int:
        if self.R.boolean:
            return (lm & -lm).bit_length() - 1
        return self.R.support(lm)[0]

    def add(self, e) -> None:
        if e[0] == 0:
            self.unit = e
            return
        self.buckets.setdefault(self._low(e[0]), []).append(e)

    def discard_multiples_of(self, lm: int) -> None:
        divides = self.R.divides
        for b, lst in self.buckets.items():
            self.buckets[b] = [e for e in lst if not divides(lm, e[0])]

    def entries(self):
        return [e for lst in self.buckets.values() for e in lst]

    def find(self, m: int):
        R = self.R
        if self.unit is not None:
            return self.unit
        if R.boolean:
            x = m
            while x:
                b = x & -x
                for e in self.buckets.get(b.bit_length() - 1, ()):
                    if e[0] & m == e[0]:
                        return e
                x ^= b
            return None
        guard = R.guard
        mg = m | guard
        for v in R.support(m):
            for e in self.buckets.get(v, ()):
                if (mg - e[0]) & guard == guard:
                    return e
        return None


def _reduce_dict(R: PolyRing, f: dict[int, int], basis) -> dict[int, int]:
    """Normal form of ``f`` w.r.t. ``basis`` (entries ``(lm, lc_inv, tail)``)."""
    if not isinstance(basis, _Reducers):
        basis = _Reducers(R, basis)
    p = R.p
    key, mul, find = R.key, R.mul, basis.find
    boolean = R.boolean
    f = dict(f)
    heap = [(-key(m), m) for m in f]
    heapq.heapify(heap)
    out: dict[int, int] = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, 0)
        if not c:
            continue
        hit = find(m)
        if hit is None:
            out[m] = c
            continue
        lm, inv, tail = hit
        q = m & ~lm if boolean else m - lm
        coef = c * inv % p
        for tm, tc in tail:
            mm = mul(q, tm)
            v = (f.get(mm, 0) - coef * tc) % p
            if v:
                if mm not in f:
                    heapq.heappush(heap, (-key(mm), mm))
                f[mm] = v
            else:
                f.pop(mm, None)
    return out


def _entry(R: PolyRing, g: dict[int, int]) -> tuple[int, int, list[tuple[int, int]]]:
    lm = max(g, key=R.key)
    return lm, R.field.inv(g[lm]), [(m, c) for m, c in g.items() if m != lm]


def normal_form(f: Polynomial, G) -> Polynomial:
    """Fully reduced remainder of ``f`` on division by the polynomials ``G``."""
    R = f.ring
    basis = [_entry(R, g.terms) for g in G if g]
    return Polynomial(R, _reduce_dict(R, f.terms, basis))


# --- Buchberger ----------------------------------------------------------------


def _field_multiplier(R: PolyRing, lm: int, i: int) -> int:
    e = (lm >> R.shifts[i]) & R.field_mask
    return R.mono([R.p - e if j == i else 0 for j in range(R.nvars)])


def _scaled(R: PolyRing, q: int, g: dict[int, int], out: dict[int, int], sign: int = 1) -> None:
    p, mul = R.p, R.mul
    for m, c in g.items():
        mm = mul(q, m)
        v = (out.get(mm, 0) + sign * c) % p
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)


def buchberger(gens, ring: PolyRing | None = None, budget: int | None = None,
               stats: GBStats | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Normal selection strategy with the product and chain criteria
    (Gebauer-Moeller update). ``budget`` bounds the number of S-polynomials
    reduced; past it :class:`GroebnerBudgetExceeded` is raised.
    """
    gens = [g for g in gens if g]
    if ring is None:
        if not gens:
            raise ValueError("need a ring for an empty generator list")
        ring = gens[0].ring
    R = ring
    p = R.p
    key, lcm_f, divides = R.key, R.lcm, R.divides
    budget = DEFAULT_PAIR_BUDGET if budget is None else budget
    stats = stats if stats is not None else GBStats()
    polys: list[dict[int, int]] = []
    lms: list[int] = []
    reducers = _Reducers(R)
    pending: dict[tuple[int, int], int] = {}
    heap: list = []
    counter = 0

    def push(kind, lcm, i, j):
        nonlocal counter
        counter += 1
        heapq.heappush(heap, (R.degree(lcm), key(lcm), counter, kind, i, j))

    def add(h: dict[int, int]):
        nonlocal pending
        lm_h = max(h, key=key)
        inv = R.field.inv(h[lm_h])
        h = {m: c * inv % p for m, c in h.items()}
        k = len(polys)
        # chain criterion on the new pairs: keep only those whose lcm is minimal
        cand = sorted(((R.degree(L), key(L), i, L) for i, L in ((i, lcm_f(lms[i], lm_h)) for i in range(k))))
        minimal: list[tuple[int, bool]] = []
        fresh = []
        for _, _, i, L in cand:
            if any(divides(L2, L) for L2, _ in minimal):
                stats.chain_skips += 1
                continue
            coprime = R.coprime(lms[i], lm_h)
            minimal.append((L, coprime))
            if coprime:
                stats.product_skips += 1
            else:
                fresh.append((i, L))
        kept = {}
        for (i, j), L in pending.items():
            if divides(lm_h, L) and lcm_f(lms[i], lm_h) != L and lcm_f(lms[j], lm_h) != L:
                stats.chain_skips += 1
            else:
                kept[(i, j)] = L
        pending = kept
        polys.append(h)
        lms.append(lm_h)
        # reducers whose leading monomial lm_h divides are redundant for division
        reducers.discard_multiples_of(lm_h)
        reducers.add(_entry(R, h))
        for i, L in fresh:
            pending[(i, k)] = L
            push("s", L, i, k)
        if R.field_reduced:
            for v in R.support(lm_h):
                stats.field_pairs += 1
                push("f", R.mul(_field_multiplier(R, lm_h, v), lm_h) if not R.boolean else lm_h, k, v)
        stats.basis_peak = max(stats.basis_peak, len(reducers.entries()))

    for g in gens:
        r = _reduce_dict(R, g.terms, reducers)
        if not r:
            continue
        if len(r) == 1 and 0 in r:
            return GroebnerBasis(R, [R.one()], stats)
        add(r)

    while heap:
        _, _, _, kind, i, j = heapq.heappop(heap)
        s: dict[int, int] = {}
        if kind == "s":
            if pending.pop((i, j), None) is None:
                continue
            L = lcm_f(lms[i], lms[j])
            _scaled(R, R.quotient(L, lms[i]), polys[i], s)
            _scaled(R, R.quotient(L, lms[j]), polys[j], s, -1)
        else:
            _scaled(R, _field_multiplier(R, lms[i], j), polys[i], s)
        stats.pairs += 1
        if stats.pairs > budget:
            raise GroebnerBudgetExceeded(f"more than {budget} S-polynomials reduced")
        h = _reduce_dict(R, s, reducers) if s else s
        if not h:
            stats.zero_reductions += 1
            continue
        if len(h) == 1 and 0 in h:
            return GroebnerBasis(R, [R.one()], stats)
        add(h)

    return GroebnerBasis(R, _interreduce(R, polys), stats)


def _interreduce(R: PolyRing, polys: list[dict[int, int]]) -> list[Polynomial]:
    key, divides = R.key, R.divides
    polys = sorted(polys, key=lambda d: key(max(d, key=key)))
    lms = [max(d, key=key) for d in polys]
    minimal = [
        d for i, (d, lm) in enumerate(zip(polys, lms))
        if not any(divides(lms[j], lm) and (lms[j] != lm or j < i) for j in range(len(polys)) if j != i)
    ]
    out = []
    for i, d in enumerate(minimal):
        others = [_entry(R, g) for j, g in enumerate(minimal) if j != i]
        lm = max(d, key=key)
        inv = R.field.inv(d[lm])
        red = _reduce_dict(R, {m: c for m, c in d.items() if m != lm}, others)
        red = {m: c * inv % R.p for m, c in red.items()}
        red[lm] = 1
        out.append(Polynomial(R, red))
    return sorted(out, key=lambda g: key(g.lm()))


def reduce_basis(polys) -> list[Polynomial]:
    """Autoreduce: divide each polynomial by the others until nothing changes.

    The result is monic and no term of any element is divisible by another
    element's leading monomial; for a Groebner basis it is the reduced basis.
    """
    polys = [g for g in polys if g]
    if not polys:
        return []
    R = polys[0].ring
    current = [dict(g.terms) for g in polys]
    changed = True
    while changed:
        changed = False
        for i in range(len(current)):
            others = [_entry(R, g) for j, g in enumerate(current) if j != i and g]
            red = _reduce_dict(R, current[i], others)
            if red != current[i]:
                current[i] = red
                changed = True
        current = [g for g in current if g]
    if any(len(g) == 1 and 0 in g for g in current):
        return [R.one()]
    return _interreduce(R, current)


def is_groebner_basis(polys) -> bool:
    """Buchberger's criterion checked directly (no pair criteria)."""
    polys = [g for g in polys if g]
    if not polys:
        return True
    R = polys[0].ring
    entries = [_entry(R, g.terms) for g in polys]
    lms = [e[0] for e in entries]
    for a in range(len(polys)):
        for b in range(a + 1, len(polys)):
            L = R.lcm(lms[a], lms[b])
            s: dict[int, int] = {}
            _scaled(R, R.quotient(L, lms[a]), polys[a].monic().terms, s)
            _scaled(R, R.quotient(L, lms[b]), polys[b].monic().terms, s, -1)
            if _reduce_dict(R, s, entries):
                return False
        if R.field_reduced:
            for v in R.support(lms[a]):
                s = {}
                _scaled(R, _field_multiplier(R, lms[a], v), polys[a].terms, s)
                if _reduce_dict(R, s, entries):
                    return False
    return True


# --- counting and points ---------------------------------------------------------


def _exponent_bounds(R: PolyRing, lms: list[int]) -> list[int]:
    """Per variable, the number of admissible exponents of standard monomials."""
    bounds = []
    for i in range(R.nvars):
        b = R.p if R.field_reduced else None
        for m in lms:
            if m and R.support(m) == [i]:
                e = R.exponents(m)[i]
                b = e if b is None else min(b, e)
        if b is None:
            raise NotZeroDimensional(f"no leading monomial is a pure power of {R.names[i]}")
        bounds.append(b)
    return bounds


def standard_monomial_count(gb: GroebnerBasis) -> int:
    """Number of monomials outside the leading ideal (dimension of the quotient).

    For ideals containing the field equations this is the number of points.
    """
    R = gb.ring
    if gb.is_unit():
        return 0
    lms = gb.leading_monomials()
    bounds = _exponent_bounds(R, lms)
    exps = [R.exponents(m) for m in lms]
    nv = R.nvars

    @lru_cache(maxsize=None)
    def count(active: frozenset, start: int) -> int:
        if any(all(x == 0 for x in exps[t][start:]) for t in active):
            return 0
        if not active:
            total = 1
            for b in bounds[start:]:
                total *= b
            return total
        if start == nv:
            return 1
        total = 0
        for e in range(bounds[start]):
            # monomials x_start^e * (rest): a leading monomial survives iff its exponent <= e
            nxt = frozenset(t for t in active if exps[t][start] <= e)
            total += count(nxt, start + 1)
        return total

    if R.boolean:
        return _boolean_count(lms, nv)
    return count(frozenset(range(len(lms))), 0)


def _boolean_count(masks: list[int], nv: int) -> int:
    """Subsets of ``nv`` variables containing none of ``masks``."""

    @lru_cache(maxsize=None)
    def rec(ms: tuple[int, ...], universe: int) -> int:
        if any(m == 0 for m in ms):
            return 0
        if not ms:
            return 1 << universe.bit_count()
        freq: dict[int, int] = {}
        for m in ms:
            x = m
            while x:
                b = x & -x
                freq[b] = freq.get(b, 0) + 1
                x ^= b
        v = max(freq, key=lambda b: (freq[b], b))
        rest = universe & ~v
        without = tuple(sorted({m for m in ms if not m & v}))
        with_v = tuple(sorted({m & ~v for m in ms}))
        return rec(without, rest) + rec(with_v, rest)

    full = (1 << nv) - 1
    return rec(tuple(sorted(set(masks))), full)


def find_point(gens, ring: PolyRing, budget: int | None = None) -> tuple[int, ...] | None:
    """A common zero in F_p^n of ``gens`` (ring must be field-reduced).

    Variables are fixed one at a time, keeping the system consistent; each
    trial is a Groebner basis computation of the specialized system.
    """
    if not ring.field_reduced:
        raise ValueError("point search needs a field-reduced ring")
    gb = buchberger(gens, ring, budget)
    if gb.is_unit():
        return None
    current = list(gb.polys)
    point = []
    for i in range(ring.nvars):
        x = ring.gen(i)
        for a in range(ring.p):
            trial = buchberger(current + [x - a], ring, budget)
            if not trial.is_unit():
                current = list(trial.polys)
                point.append(a)
                break
        else:  # pragma: no cover - impossible for a consistent zero-dimensional system
            raise RuntimeError("specialization lost all solutions")
    return tuple(point)
