"""Filtrations as exact valuation functions, and their graded shadows.

Two kinds are supported: chain filtrations on finite-dimensional
algebras (a nested list of subspaces F_0 >= F_1 >= ...) and the
(p, t)-adic filtration on truncated series bases.  Both expose the same
small protocol -- value, canonical reduction modulo a level, and a
filtration-adapted spanning set -- which is what the degree sweeps and
the skew power series layer consume.
"""

from __future__ import annotations

import itertools

from . import exactla as la
from .coeffcore import ExtInt, INFINITY
from .finalg import FinAlgebra, IdealSubspace, quotient_algebra
from .series import SeriesRing
from .skewder import AxiomReport, SkewDerivation


class FiltrationError(ValueError):
    pass


class ChainFiltration:
    """Filtration on a FinAlgebra given by a nested chain of subspaces.

    ``levels[j]`` is an rref basis of F_j; F_0 must be the whole algebra
    and the last level must be zero (separatedness).  Values are the
    integers 0 .. len(levels)-1, with value(0) = infinity.
    """

    def __init__(self, ring: FinAlgebra, levels):
        self.ring = ring
        self.levels = tuple(la.span(list(lvl), ring.p) for lvl in levels)
        if not self.levels or len(self.levels[0]) != ring.dim:
            raise FiltrationError("F_0 must be the whole algebra")
        for higher, lower in zip(self.levels[1:], self.levels, strict=False):
            if not all(la.subspace_contains(lower, v, ring.p) for v in higher):
                raise FiltrationError("levels are not nested")
        if self.levels[-1]:
            raise FiltrationError("last level must be zero (separated)")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def level_basis(self, j: int):
        if j <= 0:
            return self.levels[0]
        if j >= len(self.levels):
            return self.levels[-1]
        return self.levels[j]

    def value(self, a) -> ExtInt:
        if la.is_zero_vec(a):
            return INFINITY
        best = 0
        for j in range(1, len(self.levels)):
            if la.subspace_contains(self.levels[j], a, self.ring.p):
                best = j
            else:
                break
        return ExtInt(best)

    def reduce(self, a, j: int):
        """Canonical representative of a modulo F_j."""
        basis = self.level_basis(j)
        if not basis:
            return tuple(a)
        rows, pivots = la.rref(basis, self.ring.p)
        return la.reduce_vector(rows, pivots, a, self.ring.p)

    def adapted_basis(self):
        """Basis vectors tagged with exact values, covering every level gap."""
        # Work from the deepest level upward, extending the chosen set.
        chosen = []
        for j in range(self.depth - 1, -1, -1):
            higher = list(self.level_basis(j + 1))
            for v in self.level_basis(j):
                if not la.subspace_contains(higher + [c for c, _ in chosen], v, self.ring.p):
                    chosen.append((v, j))
        return [(v, j) for v, j in chosen]

    def symbol_coords(self, e, d: int, reps):
        """Coordinates of e's class in F_d / F_{d+1} against the reps."""
        rows = list(self.level_basis(d + 1)) + list(reps)
        coords = _solve_combination(rows, e, self.ring.p)
        if coords is None:
            raise FiltrationError("element not in the stated level")
        tail = coords[len(self.level_basis(d + 1)):]
        return tuple(tail)

    def __repr__(self):
        return f"ChainFiltration(depth={self.depth} on {self.ring!r})"


class AdicFiltration:
    """The (p, t)-adic filtration on a truncated series base ring."""

    def __init__(self, ring: SeriesRing):
        self.ring = ring

    def value(self, a) -> ExtInt:
        return self.ring.value(a)

    def reduce(self, a, j: int):
        return self.ring.reduce_mod_value(a, j)

    def adapted_basis(self):
        return self.ring.monomials_with_valuations()

    def symbol_coords(self, e, d: int, reps):
        """Digit coordinates of e at total degree d (graded over F_p)."""
        ring = self.ring
        coords = []
        for rep in reps:
            n = next(i for i, c in enumerate(rep) if c != 0)
            i = d - n
            coords.append((e[n] // ring.p**i) % ring.p)
        return tuple(coords)

    def __repr__(self):
        return f"AdicFiltration(on {self.ring!r})"


def _solve_combination(rows, v, p):
    """Coefficients expressing v as a combination of rows, or None."""
    if not rows:
        return None if not la.is_zero_vec(v) else ()
    kern = la.left_kernel(list(rows) + [tuple(v)], p)
    for c in kern:
        if c[-1] != 0:
            scale = la.finv(la.fneg(c[-1], p), p)
            return tuple(la.fmul(scale, ci, p) for ci in c[:-1])
    if la.is_zero_vec(v):
        return tuple(la.fnorm(0, p) for _ in rows)
    return None


def value(w, e) -> ExtInt:
    return w.value(e)


def check_axioms(w, samples: int = 0, rng=None) -> AxiomReport:
    """Verify the filtration axioms on basis pairs plus random pairs."""
    ring = w.ring
    report = AxiomReport()
    if not w.value(ring.zero()).is_infinite:
        report.add("w(0) = infinity", ring.zero())
    pairs = list(itertools.product([v for v, _ in _tagged(w)], repeat=2))
    if rng is not None:
        pairs += [
            (ring.random_element(rng), ring.random_element(rng))
            for _ in range(samples)
        ]
    for a, b in pairs:
        if w.value(ring.add(a, b)) < min(w.value(a), w.value(b)):
            report.add("w(x+y) >= min(w(x), w(y))", (a, b))
        if w.value(ring.mul(a, b)) < w.value(a) + w.value(b):
            report.add("w(xy) >= w(x) + w(y)", (a, b))
    for a, _ in _tagged(w):
        if w.value(a).is_infinite and not la_is_zero(ring, a):
            report.add("separated", a)
    return report


def _tagged(w):
    return w.adapted_basis()


def la_is_zero(ring, a) -> bool:
    return tuple(a) == tuple(ring.zero())


def endo_degree(w, d_matrix) -> ExtInt:
    """deg_w(d) = min over a filtration-adapted basis of w(d(v)) - w(v)."""
    ring = w.ring
    best = None
    for v, val in w.adapted_basis():
        image = la.apply_map(d_matrix, v, ring.scalar_mod)
        iv = w.value(image)
        if iv.is_infinite:
            continue
        gap = iv - ExtInt(val)
        if best is None or gap < best:
            best = gap
    return INFINITY if best is None else best


def is_compatible(w, sd: SkewDerivation) -> bool:
    """deg(sigma - id) > 0 and deg(delta) > 0."""
    mod = w.ring.scalar_mod
    ident = la.identity_map(w.ring.dim, mod)
    shift = la.map_sub(sd.sigma_matrix, ident, mod)
    return endo_degree(w, shift) > ExtInt(0) and endo_degree(w, sd.delta_matrix) > ExtInt(0)


def lemma16_check(w, sd: SkewDerivation, n: int) -> bool:
    """deg(sigma^(p^n) - id) >= n when w(p) >= 1 and deg(sigma - id) >= 1."""
    ring = w.ring
    p = getattr(ring, "p", None)
    if p is None:
        raise FiltrationError("precondition failed: base has no prime p")
    mod = ring.scalar_mod
    ident = la.identity_map(ring.dim, mod)
    p_times_one = ring.int_mul(p, ring.one())
    if w.value(p_times_one) < ExtInt(1):
        raise FiltrationError("precondition failed: w(p) < 1")
    shift = la.map_sub(sd.sigma_matrix, ident, mod)
    if endo_degree(w, shift) < ExtInt(1):
        raise FiltrationError("precondition failed: deg(sigma - id) < 1")
    if not sd.is_sigma_minus_id():
        raise FiltrationError("precondition failed: delta != sigma - id")
    power_shift = la.map_sub(sd.sigma_pow(p**n), ident, mod)
    return not endo_degree(w, power_shift) < ExtInt(n)


class GradedAlgebra:
    """Associated graded data over a finite degree window.

    Each component is a list of representative ring elements whose
    classes form a basis of F_d / F_{d+1}; symbols are coordinate tuples
    against those representatives.
    """

    def __init__(self, w, window):
        self.filtration = w
        self.window = tuple(window)
        comps = {d: [] for d in self.window}
        for v, val in w.adapted_basis():
            if val in comps:
                comps[val].append(v)
        self.components = comps

    def dim(self, d: int) -> int:
        return len(self.components.get(d, ()))

    def symbol(self, e):
        """(degree, coords) of the principal symbol of a nonzero element."""
        d = self.filtration.value(e)
        if d.is_infinite or d.half % 2 != 0:
            raise FiltrationError("element has no symbol in this window")
        d = d.half // 2
        if d not in self.components:
            raise FiltrationError("value outside the window")
        return d, self.filtration.symbol_coords(e, d, self.components[d])

    def lift(self, d: int, coords):
        ring = self.filtration.ring
        out = ring.zero()
        for c, rep in zip(coords, self.components[d], strict=True):
            out = ring.add(out, ring.smul(c, rep))
        return out

    def mul(self, d1: int, c1, d2: int, c2):
        """Product of symbols; zero coords when the product climbs levels."""
        ring = self.filtration.ring
        prod = ring.mul(self.lift(d1, c1), self.lift(d2, c2))
        d = d1 + d2
        if d not in self.components:
            raise FiltrationError("product degree outside the window")
        if self.filtration.value(prod) > ExtInt(d):
            return d, tuple(0 for _ in self.components[d])
        return self.symbol(prod)

    def to_algebra(self) -> FinAlgebra:
        """Realize the full graded ring as a FinAlgebra (chain case only)."""
        w = self.filtration
        if not isinstance(w, ChainFiltration):
            raise FiltrationError("only chain filtrations realize as FinAlgebra")
        flat = []
        degs = []
        for d in self.window:
            for rep in self.components[d]:
                flat.append(rep)
                degs.append(d)
        n = len(flat)
        if n != w.ring.dim:
            raise FiltrationError("window does not cover the whole algebra")
        p = w.ring.p
        structure = []
        for i in range(n):
            row = []
            for j in range(n):
                d = degs[i] + degs[j]
                out = [la.fnorm(0, p)] * n
                prod = w.ring.mul(flat[i], flat[j])
                if d in self.components and not w.value(prod) > ExtInt(d):
                    _, coords = self.symbol(prod)
                    offset = sum(self.dim(e) for e in self.window if e < d)
                    for t, c in enumerate(coords):
                        out[offset + t] = c
                row.append(tuple(out))
            structure.append(tuple(row))
        d0, unit_coords = self.symbol(w.ring.one())
        unit = [la.fnorm(0, p)] * n
        offset = sum(self.dim(e) for e in self.window if e < d0)
        for t, c in enumerate(unit_coords):
            unit[offset + t] = c
        return FinAlgebra(p, n, structure, unit, check=False)


def assoc_graded(w, window) -> GradedAlgebra:
    """Graded components F_d / F_{d+1} for the integer degrees in window."""
    window = tuple(window)
    if isinstance(w, ChainFiltration) and any(d > w.depth for d in window):
        raise FiltrationError("window exceeds the chain depth")
    if isinstance(w, AdicFiltration):
        cap = (w.ring.k - 1) + (w.ring.T - 1)
        if any(d > cap for d in window):
            raise FiltrationError("window exceeds the truncation")
    return GradedAlgebra(w, window)


def gr_prime_implies_prime(w: ChainFiltration) -> bool:
    """If the full graded algebra is prime, so is the parent (vacuous otherwise)."""
    from .finalg import is_prime_fd

    gr = assoc_graded(w, range(w.depth + 1))
    if not is_prime_fd(gr.to_algebra()):
        return True
    return is_prime_fd(w.ring)


def quotient_filtration(w: ChainFiltration, I: IdealSubspace):
    """Filtration on the quotient with wbar(r + I) = sup over the coset.

    Returns (wbar, B, project, lift); the levels of wbar are the images
    of the levels of w, which realizes the sup formula exactly.
    """
    A = w.ring
    B, project, lift = quotient_algebra(A, I)
    levels = []
    for lvl in w.levels:
        levels.append(la.span([project(v) for v in lvl], A.p))
    # Trim so the chain still ends at zero.
    while len(levels) > 1 and levels[-2] == levels[-1] == ():
        levels.pop()
    if levels[-1]:
        levels.append(())
    wbar = ChainFiltration(B, levels)
    return wbar, B, project, lift
