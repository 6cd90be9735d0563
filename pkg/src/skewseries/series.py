"""Truncated commutative power series base rings (Z/p^k)[t]/(t^T).

These are the coefficient rings under the skew power series machinery:
F_p[[t]]/(t^T) for k = 1, and Z/p^k (as T = 1, or with a t on top) for
the mixed-characteristic demos.  Elements are tuples of T residues
modulo p^k.
"""

from __future__ import annotations

from .coeffcore import ExtInt, INFINITY, is_prime, vp


class SeriesRing:
    """(Z/p^k)[t]/(t^T), commutative, with the (p, t)-adic valuation."""

    def __init__(self, p: int, T: int, k: int = 1):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if T < 1 or k < 1:
            raise ValueError("T and k must be >= 1")
        self.p = p
        self.k = k
        self.T = T
        self.modulus = p**k

    @property
    def char(self) -> int:
        return self.modulus

    @property
    def scalar_mod(self) -> int:
        return self.modulus

    @property
    def dim(self) -> int:
        return self.T

    def zero(self):
        return (0,) * self.T

    def one(self):
        return (1,) + (0,) * (self.T - 1)

    def gen(self):
        if self.T < 2:
            raise ValueError("no t generator at T = 1")
        return tuple(1 if i == 1 else 0 for i in range(self.T))

    def element(self, coeffs):
        coeffs = list(coeffs)[: self.T]
        coeffs += [0] * (self.T - len(coeffs))
        return tuple(c % self.modulus for c in coeffs)

    def monomial(self, c: int, n: int):
        if n >= self.T:
            return self.zero()
        return tuple(c % self.modulus if i == n else 0 for i in range(self.T))

    def basis(self):
        return [self.monomial(1, n) for n in range(self.T)]

    def add(self, a, b):
        return tuple((x + y) % self.modulus for x, y in zip(a, b, strict=True))

    def sub(self, a, b):
        return tuple((x - y) % self.modulus for x, y in zip(a, b, strict=True))

    def neg(self, a):
        return tuple((-x) % self.modulus for x in a)

    def smul(self, c, a):
        return tuple((c * x) % self.modulus for x in a)

    int_mul = smul

    def mul(self, a, b):
        out = [0] * self.T
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y == 0 or i + j >= self.T:
                    continue
                out[i + j] = (out[i + j] + x * y) % self.modulus
        return tuple(out)

    def is_central(self, a):
        return True

    def is_unit(self, a) -> bool:
        return a[0] % self.p != 0

    def inverse(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError("not a unit")
        b0 = pow(a[0], -1, self.modulus)
        out = [b0] + [0] * (self.T - 1)
        for n in range(1, self.T):
            acc = sum(a[i] * out[n - i] for i in range(1, n + 1))
            out[n] = (-b0 * acc) % self.modulus
        return tuple(out)

    def random_element(self, rng):
        return tuple(rng.randrange(self.modulus) for _ in range(self.T))

    def value(self, a) -> ExtInt:
        """(p, t)-adic valuation: min over terms of v_p(c_n) + n."""
        best = None
        for n, c in enumerate(a):
            if c % self.modulus == 0:
                continue
            v = vp(c % self.modulus, self.p) + n
            if best is None or v < best:
                best = v
        return INFINITY if best is None else ExtInt(best)

    def reduce_mod_value(self, a, j) -> tuple:
        """Canonical representative of a modulo {x : value(x) >= j}."""
        if isinstance(j, ExtInt):
            if j.is_infinite:
                return a
            if j.half % 2 != 0:
                raise ValueError("series values are integers")
            j = j.half // 2
        out = []
        for n, c in enumerate(a):
            keep = j - n
            if keep <= 0:
                out.append(0)
            elif keep >= self.k:
                out.append(c % self.modulus)
            else:
                out.append(c % self.p**keep)
        return tuple(out)

    def monomials_with_valuations(self):
        """Spanning set p^i t^n with exact valuations, for degree sweeps."""
        out = []
        for n in range(self.T):
            for i in range(self.k):
                out.append((self.monomial(self.p**i, n), i + n))
        return out

    def __repr__(self):
        if self.k == 1:
            return f"F_{self.p}[t]/(t^{self.T})"
        return f"(Z/{self.modulus})[t]/(t^{self.T})"
