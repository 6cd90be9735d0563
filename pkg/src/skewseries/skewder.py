"""Skew derivations (sigma, delta) and their expansion formulas.

A skew derivation is an automorphism sigma together with an additive
delta obeying the twisted Leibniz rule delta(ab) = delta(a)b +
sigma(a)delta(b).  When sigma and delta commute we get the binomial
expansion of delta^n(ab), and in characteristic p the carry-free
trinomial expansion of delta^n(axb).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import exactla as la
from .coeffcore import alpha_coeff, digits, is_prime, no_common_component, trinomial_indices
from .finalg import FinAlgebra, IdealSubspace, subspace


class SkewDerivationError(ValueError):
    pass


@dataclass
class AxiomReport:
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, axiom: str, witness) -> None:
        self.violations.append((axiom, witness))

    def __str__(self):
        if self.valid:
            return "valid"
        return "\n".join(f"{axiom}: witness {witness}" for axiom, witness in self.violations)


class SkewDerivation:
    """Pair of additive maps on a ring, stored as basis-image matrices."""

    def __init__(self, ring, sigma, delta, q=None):
        self.ring = ring
        self.sigma_matrix = tuple(tuple(row) for row in sigma)
        self.delta_matrix = tuple(tuple(row) for row in delta)
        self.q = q

    @classmethod
    def from_gen_images(cls, ring, sigma_gen, delta_gen, q=None):
        """Extend generator images over a monomial basis 1, g, g^2, ...

        Works for SeriesRing (g = t) and for truncated polynomial
        FinAlgebras (g = the degree-1 basis vector): sigma extends
        multiplicatively, delta by the twisted Leibniz rule.
        """
        n = ring.dim
        sigma_rows = [ring.one()]
        for _ in range(1, n):
            sigma_rows.append(ring.mul(sigma_rows[-1], sigma_gen))
        delta_rows = [ring.zero(), delta_gen]
        for i in range(2, n):
            # delta(g^i) = delta(g) g^(i-1) + sigma(g) delta(g^(i-1))
            prev_mono = _monomial(ring, i - 1)
            term = ring.add(
                ring.mul(delta_gen, prev_mono),
                ring.mul(sigma_gen, delta_rows[i - 1]),
            )
            delta_rows.append(term)
        if n == 1:
            delta_rows = [ring.zero()]
        return cls(ring, tuple(sigma_rows), tuple(delta_rows[:n]), q=q)

    @classmethod
    def identity(cls, ring):
        n = ring.dim
        mod = ring.scalar_mod
        return cls(ring, la.identity_map(n, mod), tuple(la.zero_vec(n, mod) for _ in range(n)))

    # -- map application ---------------------------------------------------

    def sigma(self, a):
        return la.apply_map(self.sigma_matrix, a, self.ring.scalar_mod)

    def delta(self, a):
        return la.apply_map(self.delta_matrix, a, self.ring.scalar_mod)

    def sigma_pow(self, n: int):
        return la.map_power(self.sigma_matrix, n, self.ring.scalar_mod)

    def delta_pow(self, n: int):
        return la.map_power(self.delta_matrix, n, self.ring.scalar_mod)

    def apply_sigma_pow(self, a, n: int):
        for _ in range(n):
            a = self.sigma(a)
        return a

    def apply_delta_pow(self, a, n: int):
        for _ in range(n):
            a = self.delta(a)
        return a

    @property
    def commuting(self) -> bool:
        mod = self.ring.scalar_mod
        return la.compose(self.sigma_matrix, self.delta_matrix, mod) == la.compose(
            self.delta_matrix, self.sigma_matrix, mod
        )

    def is_sigma_minus_id(self) -> bool:
        mod = self.ring.scalar_mod
        ident = la.identity_map(self.ring.dim, mod)
        return self.delta_matrix == la.map_sub(self.sigma_matrix, ident, mod)

    def __repr__(self):
        return f"SkewDerivation(on {self.ring!r})"


def _monomial(ring, i):
    if hasattr(ring, "monomial"):
        return ring.monomial(1, i)
    return ring.basis_vec(i)


def check_skew_derivation(sd: SkewDerivation) -> AxiomReport:
    """Verify all axioms on basis pairs; report violations with witnesses."""
    ring = sd.ring
    report = AxiomReport()
    if not la.is_invertible(sd.sigma_matrix, ring.scalar_mod):
        report.add("sigma bijective", "matrix is singular")
    if sd.sigma(ring.one()) != ring.one():
        report.add("sigma(1) = 1", ring.one())
    basis = ring.basis()
    for i, e in enumerate(basis):
        for j, f in enumerate(basis):
            lhs = sd.sigma(ring.mul(e, f))
            rhs = ring.mul(sd.sigma(e), sd.sigma(f))
            if lhs != rhs:
                report.add("sigma multiplicative", (i, j))
            leib = ring.add(ring.mul(sd.delta(e), f), ring.mul(sd.sigma(e), sd.delta(f)))
            if sd.delta(ring.mul(e, f)) != leib:
                report.add("Leibniz", (i, j))
    if sd.delta(ring.one()) != ring.zero():
        report.add("delta(1) = 0", ring.one())
    if sd.q is not None:
        q = sd.q
        if not ring.is_central(q):
            report.add("q central", q)
        if sd.sigma(q) != q:
            report.add("sigma(q) = q", q)
        if sd.delta(q) != ring.zero():
            report.add("delta(q) = 0", q)
        for i, e in enumerate(basis):
            lhs = sd.delta(sd.sigma(e))
            rhs = ring.mul(q, sd.sigma(sd.delta(e)))
            if lhs != rhs:
                report.add("delta sigma = q sigma delta", i)
    return report


def pth_power(sd: SkewDerivation, m: int) -> SkewDerivation:
    """The skew derivation (sigma^(p^m), delta^(p^m)) in characteristic p."""
    p = sd.ring.char
    if p == 0 or not is_prime(p):
        raise SkewDerivationError("requires characteristic p")
    if not sd.commuting:
        raise SkewDerivationError("requires sigma delta = delta sigma")
    e = p**m
    return SkewDerivation(sd.ring, sd.sigma_pow(e), sd.delta_pow(e), q=sd.q)


def sigma_shift_power(sd: SkewDerivation, n: int) -> SkewDerivation:
    """(sigma^n, sigma^n - id) for a derivation of shape (sigma, sigma - id)."""
    if not sd.is_sigma_minus_id():
        raise SkewDerivationError("requires delta = sigma - id")
    mod = sd.ring.scalar_mod
    sig_n = sd.sigma_pow(n)
    ident = la.identity_map(sd.ring.dim, mod)
    return SkewDerivation(sd.ring, sig_n, la.map_sub(sig_n, ident, mod), q=sd.q)


def delta_n_oracle(sd: SkewDerivation, e, n: int):
    """delta applied n times by direct iteration: the independent oracle."""
    return sd.apply_delta_pow(e, n)


def delta_n_product(sd: SkewDerivation, a, b, n: int):
    """Binomial expansion of delta^n(ab) for commuting sigma, delta."""
    if not sd.commuting:
        raise SkewDerivationError("requires sigma delta = delta sigma")
    ring = sd.ring
    total = ring.zero()
    for k in range(n + 1):
        left = sd.apply_delta_pow(sd.apply_sigma_pow(a, n - k), k)
        right = sd.apply_delta_pow(b, n - k)
        term = ring.int_mul(math.comb(n, k), ring.mul(left, right))
        total = ring.add(total, term)
    return total


def trinomial_expand(sd: SkewDerivation, a, x, b, n: int):
    """Carry-free trinomial expansion of delta^n(axb) in characteristic p."""
    p = sd.ring.char
    if p == 0 or not is_prime(p):
        raise SkewDerivationError("requires characteristic p")
    if not sd.commuting:
        raise SkewDerivationError("requires sigma delta = delta sigma")
    ring = sd.ring
    total = ring.zero()
    for i, j, k in trinomial_indices(n, p):
        coeff = alpha_coeff(i, j, k, p)
        ta = sd.apply_delta_pow(sd.apply_sigma_pow(a, n - i), i)
        tx = sd.apply_delta_pow(sd.apply_sigma_pow(x, k), j)
        tb = sd.apply_delta_pow(b, k)
        term = ring.int_mul(coeff, ring.mul(ring.mul(ta, tx), tb))
        total = ring.add(total, term)
    return total


def _minimal_escape(sd: SkewDerivation, I: IdealSubspace, a, bound: int):
    """Smallest r with delta^r(a) not in I, or None within the bound."""
    current = a
    for r in range(bound + 1):
        if not I.contains(current):
            return r
        current = sd.delta(current)
    return None


def cor36_check(sd: SkewDerivation, I: IdealSubspace, a, b, x, r: int, s: int) -> bool:
    """delta^(r+s)(axb) = alpha * delta^r sigma^s(a) sigma^s(x) delta^s(b) mod I.

    Preconditions (each reported separately on failure): a, b in I with
    minimal escape exponents exactly r and s, and [r], [s] carry-free
    disjoint in base p.
    """
    ring = sd.ring
    p = ring.char
    if p == 0 or not is_prime(p):
        raise SkewDerivationError("requires characteristic p")
    if not I.contains(a) or not I.contains(b):
        raise SkewDerivationError("a and b must lie in I")
    bound = max(r, s) + 1
    ra = _minimal_escape(sd, I, a, bound)
    rb = _minimal_escape(sd, I, b, bound)
    if ra != r:
        raise SkewDerivationError(f"r is not minimal for a (found {ra})")
    if rb != s:
        raise SkewDerivationError(f"s is not minimal for b (found {rb})")
    if not no_common_component(digits(r, p), digits(s, p)):
        raise SkewDerivationError("[r] and [s] share a common component")
    alpha = alpha_coeff(r, 0, s, p)
    lhs = sd.apply_delta_pow(ring.mul(ring.mul(a, x), b), r + s)
    rhs = ring.int_mul(
        alpha,
        ring.mul(
            ring.mul(
                sd.apply_delta_pow(sd.apply_sigma_pow(a, s), r),
                sd.apply_sigma_pow(x, s),
            ),
            sd.apply_delta_pow(b, s),
        ),
    )
    return I.contains(ring.sub(lhs, rhs))


def lemma31_check(sd: SkewDerivation, I: IdealSubspace) -> bool:
    """I + delta(I) is closed under two-sided multiplication."""
    A: FinAlgebra = sd.ring
    if not all(I.contains(sd.sigma(v)) for v in I.basis):
        raise SkewDerivationError("I is not sigma-stable")
    vectors = list(I.basis) + [sd.delta(v) for v in I.basis]
    J = subspace(A, vectors)
    for v in J.basis:
        for e in A.basis():
            if not J.contains(A.mul(e, v)) or not J.contains(A.mul(v, e)):
                return False
    return True


def derivation_on_truncated_poly(A: FinAlgebra, sigma_gen, delta_gen, q=None) -> SkewDerivation:
    """Build (sigma, delta) on F[X]/(X^n) from images of X."""
    return SkewDerivation.from_gen_images(A, sigma_gen, delta_gen, q=q)
