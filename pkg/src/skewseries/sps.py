"""Truncated skew power series rings R[[x; sigma, delta]].

Elements are left-coefficient polynomials sum r_k x^k (k < D) with the
commutation rule x a = sigma(a) x + delta(a).  Naive rectangular
truncation in x is not associative, so the ring computed here is the
quotient by the staircase ideal {h : u(r_k) + k >= D for all k}, which
is a genuine two-sided ideal whenever the base filtration u is positive
and compatible with (sigma, delta).  Coefficients are stored as the
canonical staircase residues, so equality of tuples is equality in the
quotient ring.
"""

from __future__ import annotations

import itertools
import math

from . import exactla as la
from .coeffcore import ExtInt, INFINITY
from .filtration import (
    AdicFiltration,
    ChainFiltration,
    GradedAlgebra,
    assoc_graded,
    endo_degree,
    is_compatible,
    quotient_filtration,
)
from .finalg import FinAlgebra, IdealSubspace, induced_map
from .series import SeriesRing
from .skewder import SkewDerivation, sigma_shift_power


class SPSError(ValueError):
    pass


class PrecisionError(SPSError):
    pass


class SPSRing:
    """Truncated skew power series ring over a filtered base."""

    def __init__(self, base, sd: SkewDerivation, u, D: int, check: bool = True):
        if D < 1:
            raise SPSError("D must be >= 1")
        if u.ring is not base or sd.ring is not base:
            raise SPSError("base, filtration and skew derivation must agree")
        self.base = base
        self.sd = sd
        self.u = u
        self.D = D
        if check and not is_compatible(u, sd):
            raise SPSError("skew derivation is not compatible with the filtration")

    # -- element plumbing ---------------------------------------------------

    def normalize(self, coeffs):
        """Canonical staircase residues: r_k reduced modulo value >= D - k."""
        coeffs = list(coeffs)[: self.D]
        coeffs += [self.base.zero()] * (self.D - len(coeffs))
        return tuple(self.u.reduce(c, self.D - k) for k, c in enumerate(coeffs))

    def element(self, coeffs):
        return self.normalize(coeffs)

    def zero(self):
        return self.normalize([])

    def one(self):
        return self.normalize([self.base.one()])

    def x(self):
        if self.D < 2:
            raise SPSError("no x at D = 1")
        return self.normalize([self.base.zero(), self.base.one()])

    def constant(self, r):
        return self.normalize([r])

    def random_element(self, rng):
        return self.normalize([self.base.random_element(rng) for _ in range(self.D)])

    def add(self, f, g):
        return self.normalize(
            self.base.add(a, b) for a, b in zip(f, g, strict=True)
        )

    def sub(self, f, g):
        return self.normalize(
            self.base.sub(a, b) for a, b in zip(f, g, strict=True)
        )

    def neg(self, f):
        return self.normalize(self.base.neg(a) for a in f)

    def int_mul(self, n, f):
        return self.normalize(self.base.int_mul(n, a) for a in f)

    def is_zero(self, f) -> bool:
        return f == self.zero()

    # -- multiplication -----------------------------------------------------

    def _x_power_rows(self, s, imax):
        """rows[i][k] = coefficient of x^k in x^i * s, for i <= imax."""
        base, sd = self.base, self.sd
        rows = [{0: s}]
        for i in range(1, imax + 1):
            prev = rows[-1]
            row = {}
            for k, c in prev.items():
                shifted = sd.sigma(c)
                if shifted != base.zero():
                    row[k + 1] = base.add(row.get(k + 1, base.zero()), shifted)
                lowered = sd.delta(c)
                if lowered != base.zero():
                    row[k] = base.add(row.get(k, base.zero()), lowered)
            rows.append(row)
        return rows

    def mul(self, f, g):
        base = self.base
        out = [base.zero()] * self.D
        for j, s in enumerate(g):
            if s == base.zero():
                continue
            rows = self._x_power_rows(s, self.D - 1 - j)
            for i, r in enumerate(f):
                if r == base.zero() or i + j >= self.D:
                    continue
                for k, c in rows[i].items():
                    if k + j < self.D:
                        out[k + j] = base.add(out[k + j], base.mul(r, c))
        return self.normalize(out)

    multiply = mul

    def power(self, f, n: int):
        result = self.one()
        for _ in range(n):
            result = self.mul(result, f)
        return result

    # -- the filtration f_u --------------------------------------------------

    def f_u_value(self, f) -> ExtInt:
        """min over coefficients of u(r_k) + k/2, an exact half-integer."""
        best = None
        for k, r in enumerate(f):
            v = self.u.value(r)
            if v.is_infinite:
                continue
            val = ExtInt(halves=v.half + k)
            if best is None or val < best:
                best = val
        return INFINITY if best is None else best

    def boundedness_check(self, f, floor) -> bool:
        """Windowed membership in the bounded ring: all u(r_k) + k/2 >= floor."""
        floor = floor if isinstance(floor, ExtInt) else ExtInt(floor)
        for k, r in enumerate(f):
            v = self.u.value(r)
            if v.is_infinite:
                continue
            if ExtInt(halves=v.half + k) < floor:
                return False
        return True

    def serialize(self, f) -> str:
        """Canonical sparse text form, stable across runs."""
        sym = "t" if isinstance(self.base, SeriesRing) else "e"
        terms = []
        for b, r in enumerate(f):
            for a, c in enumerate(r):
                if c == 0:
                    continue
                parts = [str(c)]
                if a > 0 or sym == "e":
                    parts.append(f"{sym}^{a}")
                if b > 0:
                    parts.append(f"x^{b}")
                terms.append("*".join(parts))
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"SPSRing(D={self.D} over {self.base!r})"


# -- graded isomorphism check -------------------------------------------------


def _spanning_symbols(S: SPSRing):
    """Elements m x^b with exact f_u value u(m) + b/2, one per monomial slot."""
    out = []
    for m, val in S.u.adapted_basis():
        for b in range(S.D):
            coeffs = [S.base.zero()] * S.D
            coeffs[b] = m
            out.append((S.element(coeffs), m, b, ExtInt(halves=2 * val + b)))
    return out


def graded_iso_check(S: SPSRing, window_halves, sample_pairs: int = 40, rng=None) -> bool:
    """gr_{f_u}(S) matches gr_u(R)[Z]: dimensions plus symbol multiplicativity.

    ``window_halves`` is an iterable of doubled degrees (so 3 means 3/2);
    every degree must sit strictly below D/2, where the staircase
    truncation cannot interfere.
    """
    if any(h >= S.D for h in window_halves):
        raise PrecisionError("window reaches D/2: truncation interferes")
    base_degrees = [val for _, val in S.u.adapted_basis()]
    spanning = _spanning_symbols(S)
    for h in window_halves:
        expected = sum(
            1
            for val in base_degrees
            for b in range(S.D)
            if 2 * val + b == h
        )
        actual = 0
        for f, _m, _b, _nominal in spanning:
            v = S.f_u_value(f)
            if not v.is_infinite and v.half == h:
                actual += 1
        if actual != expected:
            return False
    # Symbol multiplicativity: x maps to Z, coefficients to their symbols.
    window_max = max(window_halves, default=0)
    candidates = [
        (f, m, b, nominal)
        for f, m, b, nominal in spanning
        if not nominal.is_infinite and nominal.half <= window_max
    ]
    pairs = list(itertools.product(candidates, repeat=2))
    if rng is not None and len(pairs) > sample_pairs:
        pairs = rng.sample(pairs, sample_pairs)
    for (f, m1, b1, v1), (g, m2, b2, v2) in pairs:
        total = v1 + v2
        if total.is_infinite or total.half > window_max:
            continue
        prod = S.mul(f, g)
        if S.f_u_value(prod) != total:
            return False
        # Leading coefficient at x-degree b1+b2 is m1 * sigma^{b1}(m2) up
        # to strictly larger base value (the delta terms).
        lead = prod[b1 + b2]
        twisted = S.base.mul(m1, S.sd.apply_sigma_pow(m2, b1))
        diff = S.base.sub(lead, twisted)
        if not S.u.value(diff) > S.u.value(twisted):
            return False
    return True


# -- quotients ----------------------------------------------------------------


def quotient_sps(S: SPSRing, I: IdealSubspace):
    """(S over base/I, projection): Lemma-style quotient by coefficientwise I.

    The base must be a chain-filtered FinAlgebra and I must be stable
    under both sigma and delta; the error names the failing map.
    """
    base = S.base
    if not isinstance(base, FinAlgebra) or not isinstance(S.u, ChainFiltration):
        raise SPSError("quotients are supported over chain-filtered FinAlgebra bases")
    for v in I.basis:
        if not I.contains(S.sd.sigma(v)):
            raise SPSError("ideal is not stable under sigma")
    for v in I.basis:
        if not I.contains(S.sd.delta(v)):
            raise SPSError("ideal is not stable under delta")
    wbar, B, project, lift = quotient_filtration(S.u, I)
    sigma_bar = induced_map(base, S.sd.sigma_matrix, I, B, project, lift)
    delta_bar = induced_map(base, S.sd.delta_matrix, I, B, project, lift)
    sd_bar = SkewDerivation(B, sigma_bar, delta_bar, q=S.sd.q)
    Sbar = SPSRing(B, sd_bar, wbar, S.D, check=False)

    def project_elem(f):
        return Sbar.normalize([project(r) for r in f])

    return Sbar, project_elem


def quotient_kernel_check(S: SPSRing, I: IdealSubspace, project_elem, f) -> bool:
    """f projects to zero iff every coefficient lies in I."""
    Sbar_zero_check = project_elem(f)
    coeffwise = all(I.contains(r) for r in f)
    is_zero = all(all(c == 0 for c in r) for r in Sbar_zero_check)
    return coeffwise == is_zero


# -- substitution and the crossed product decomposition ------------------------


def substitute_xN(S: SPSRing, N: int):
    """x_N = (x+1)^(p^N) - 1 plus the descriptor of its subring."""
    p = S.base.p
    e = p**N
    if e > S.D:
        raise PrecisionError("p^N exceeds the x-truncation degree")
    x_plus_1 = S.add(S.x(), S.one()) if S.D >= 2 else S.one()
    xN = S.sub(S.power(x_plus_1, e), S.one())
    descriptor = {
        "exponent": e,
        "sd": sigma_shift_power(S.sd, e) if S.sd.is_sigma_minus_id() else None,
    }
    return xN, descriptor


def crossed_decompose(S: SPSRing, N: int, f):
    """Components s_0..s_{p^N - 1} with f = sum s_i (x+1)^i, each in x_N.

    Each component is returned as a list of base coefficients indexed by
    the power of x_N; use crossed_recompose to map back into S.
    """
    if not S.sd.is_sigma_minus_id():
        raise SPSError("requires delta = sigma - id")
    p = S.base.p
    e = p**N
    if e > S.D:
        raise PrecisionError("p^N exceeds the x-truncation degree")
    base = S.base
    # Rewrite in y = x + 1: s_j = sum_k r_k binom(k, j) (-1)^(k-j).
    y_coeffs = [base.zero()] * S.D
    for k, r in enumerate(f):
        for j in range(k + 1):
            c = math.comb(k, j) * (-1) ** (k - j)
            y_coeffs[j] = base.add(y_coeffs[j], base.int_mul(c, r))
    # Split y^j = (x_N + 1)^q y^i with j = q e + i, expanding the binomial.
    width = (S.D - 1) // e + 1
    components = [[base.zero()] * width for _ in range(e)]
    for j, s in enumerate(y_coeffs):
        q, i = divmod(j, e)
        for a in range(q + 1):
            c = math.comb(q, a)
            components[i][a] = base.add(components[i][a], base.int_mul(c, s))
    return components


def crossed_recompose(S: SPSRing, N: int, components):
    """sum_i (sum_a c_{i,a} x_N^a) (x+1)^i evaluated in S."""
    xN, _ = substitute_xN(S, N)
    x_plus_1 = S.add(S.x(), S.one())
    xN_powers = [S.one()]
    width = max(len(comp) for comp in components)
    for _ in range(1, width):
        xN_powers.append(S.mul(xN_powers[-1], xN))
    y_powers = [S.one()]
    for _ in range(1, len(components)):
        y_powers.append(S.mul(y_powers[-1], x_plus_1))
    total = S.zero()
    for i, comp in enumerate(components):
        part = S.zero()
        for a, c in enumerate(comp):
            part = S.add(part, S.mul(S.constant(c), xN_powers[a]))
        total = S.add(total, S.mul(part, y_powers[i]))
    return total


# -- shipped demo rings ---------------------------------------------------------


def iwasawa_demo(p: int, T: int, D: int) -> SPSRing:
    """Truncated Iwasawa-type ring: base F_p[[t]]/(t^T), sigma(t) = (1+t)^(1+p) - 1."""
    if T < 2 or D < 2:
        raise SPSError("T and D must be >= 2")
    base = SeriesRing(p, T)
    one_plus_t = base.add(base.one(), base.gen())
    sigma_t = base.zero()
    power = base.one()
    for _ in range(p + 1):
        power = base.mul(power, one_plus_t)
    sigma_t = base.sub(power, base.one())
    delta_t = base.sub(sigma_t, base.gen())
    sd = SkewDerivation.from_gen_images(base, sigma_t, delta_t)
    u = AdicFiltration(base)
    return SPSRing(base, sd, u, D)


def tpow_demo(p: int, T: int, D: int) -> SPSRing:
    """The delta(t) = t^(p+1), sigma = id demo ring over F_p[[t]]/(t^T)."""
    if T < 2 or D < 2:
        raise SPSError("T and D must be >= 2")
    base = SeriesRing(p, T)
    sd = SkewDerivation.from_gen_images(base, base.gen(), base.monomial(1, p + 1))
    u = AdicFiltration(base)
    return SPSRing(base, sd, u, D)
