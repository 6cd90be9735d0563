"""Base-p digit combinatorics and the exact scalar values they feed.

Everything here is pure integer arithmetic: p-adic valuations, base-p
expansions, carry-free digit splittings and their multinomial
coefficients, q-factorials, and half-integer filtration values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def vp(n: int, p: int) -> int:
    """Largest e with p^e dividing n.  Raises on n = 0."""
    if n == 0:
        raise ValueError("valuation of zero")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@total_ordering
class ExtInt:
    """Exact half-integer with a distinguished infinity.

    Stored as a doubled integer so values in (1/2)Z never touch floats.
    Infinity absorbs addition and dominates every finite value.
    """

    __slots__ = ("half",)

    def __init__(self, value=0, *, halves: int | None = None):
        if halves is not None:
            self.half = halves
        else:
            doubled = 2 * value
            if doubled != int(doubled):
                raise ValueError("ExtInt holds half-integers only")
            self.half = int(doubled)

    @classmethod
    def infinity(cls) -> "ExtInt":
        obj = cls.__new__(cls)
        obj.half = None
        return obj

    @property
    def is_infinite(self) -> bool:
        return self.half is None

    def __add__(self, other):
        if not isinstance(other, ExtInt):
            other = ExtInt(other)
        if self.is_infinite or other.is_infinite:
            return ExtInt.infinity()
        return ExtInt(halves=self.half + other.half)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, ExtInt):
            other = ExtInt(other)
        if self.is_infinite:
            return ExtInt.infinity()
        if other.is_infinite:
            raise ValueError("cannot subtract infinity")
        return ExtInt(halves=self.half - other.half)

    def __eq__(self, other):
        if isinstance(other, ExtInt):
            return self.half == other.half
        if self.is_infinite:
            return False
        return self.half == 2 * other

    def __lt__(self, other):
        if not isinstance(other, ExtInt):
            other = ExtInt(other)
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self.half < other.half

    def __hash__(self):
        return hash(("ExtInt", self.half))

    def __repr__(self):
        if self.is_infinite:
            return "oo"
        if self.half % 2 == 0:
            return str(self.half // 2)
        return f"{self.half}/2"


INFINITY = ExtInt.infinity()


@dataclass(frozen=True)
class Digits:
    """Little-endian base-p expansion; entries[i] is the coefficient of p^i."""

    base: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.base):
            raise ValueError(f"base {self.base} is not prime")
        if any(not (0 <= a < self.base) for a in self.entries):
            raise ValueError("digit out of range")
        if self.entries and self.entries[-1] == 0:
            raise ValueError("trailing zero digits must be trimmed")

    def value(self) -> int:
        return sum(a * self.base**i for i, a in enumerate(self.entries))

    def digit(self, i: int) -> int:
        return self.entries[i] if i < len(self.entries) else 0

    def __len__(self):
        return len(self.entries)


def digits(n: int, p: int) -> Digits:
    if n < 0:
        raise ValueError("n must be nonnegative")
    entries = []
    while n > 0:
        n, a = divmod(n, p)
        entries.append(a)
    return Digits(p, tuple(entries))


def no_common_component(a: Digits, b: Digits) -> bool:
    """True iff no digit slot is nonzero in both expansions."""
    if a.base != b.base:
        raise ValueError("mismatched bases")
    return all(a.digit(i) == 0 or b.digit(i) == 0 for i in range(max(len(a), len(b))))


def _digit_splits(a: int):
    for u in range(a + 1):
        for v in range(a - u + 1):
            yield u, v, a - u - v


def trinomial_indices(n: int, p: int) -> list[tuple[int, int, int]]:
    """All (i, j, k) whose base-p digits sum slotwise, without carries, to n's."""
    dn = digits(n, p)
    triples = [(0, 0, 0)]
    for t in range(len(dn)):
        step = p**t
        new = []
        for u, v, w in _digit_splits(dn.digit(t)):
            for i, j, k in triples:
                new.append((i + u * step, j + v * step, k + w * step))
        triples = new
    return sorted(triples)


def alpha_coeff(i: int, j: int, k: int, p: int) -> int:
    """Unit scalar mod p attached to a carry-free digit splitting.

    Computed slotwise: the product over digit positions t of the
    multinomial (n_t choose i_t, j_t, k_t) reduced mod p, where n = i+j+k.
    """
    n = i + j + k
    di, dj, dk, dn = digits(i, p), digits(j, p), digits(k, p), digits(n, p)
    coeff = 1
    for t in range(len(dn)):
        u, v, w = di.digit(t), dj.digit(t), dk.digit(t)
        if u + v + w != dn.digit(t):
            raise ValueError("carries present: digit condition violated")
        coeff = coeff * (math.factorial(u + v + w) // (math.factorial(u) * math.factorial(v) * math.factorial(w))) % p
    if coeff == 0:
        raise AssertionError("digitwise multinomial vanished mod p")
    return coeff


def multinomial(n: int, i: int, j: int, k: int) -> int:
    """Exact integer multinomial coefficient n! / (i! j! k!)."""
    if i + j + k != n:
        raise ValueError("parts must sum to n")
    return math.factorial(n) // (math.factorial(i) * math.factorial(j) * math.factorial(k))


def qfactorial(n: int, q, ring):
    """Product of the partial geometric sums 1 + q + ... + q^(m-1), m <= n."""
    if not ring.is_central(q):
        raise ValueError("q must be central")
    result = ring.one()
    power = ring.one()
    partial = ring.zero()
    for _ in range(1, n + 1):
        partial = ring.add(partial, power)
        # partial now holds 1 + q + ... + q^(m-1) after m-1 updates of power
        result_next = ring.mul(result, partial)
        power = ring.mul(power, q)
        result = result_next
    return result


def binom_valuation_check(n: int, i: int, p: int) -> bool:
    """vp(binom(p^n, i)) == n - vp(i), by exact big-integer arithmetic."""
    if not 1 <= i <= p**n:
        raise ValueError("need 1 <= i <= p^n")
    return vp(math.comb(p**n, i), p) == n - vp(i, p)
