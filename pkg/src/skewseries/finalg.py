"""Finite-dimensional associative unital algebras from structure constants.

Algebras live over F_p or Q; elements are coordinate tuples; ideals are
subspaces in reduced row echelon form (so equality is literal tuple
equality).  On top of the arithmetic sit radicals, Wedderburn block
detection via central idempotents, automorphism orbits of ideals, and
sigma-prime testing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import exactla as la


class AlgebraError(ValueError):
    pass


class OrbitCapExceeded(AlgebraError):
    pass


class FinAlgebra:
    """Associative unital algebra given by structure constants.

    ``structure[i][j]`` is the coordinate vector of e_i * e_j.  ``p`` is a
    prime for F_p coefficients or None for Q.  Associativity and the unit
    law are checked on all basis triples at construction.
    """

    def __init__(self, p, dim, structure, unit, check=True):
        self.p = p
        self.dim = dim
        self.structure = tuple(
            tuple(la.vec(entry, p) for entry in row) for row in structure
        )
        self.unit = la.vec(unit, p)
        if check:
            self._validate()

    @property
    def char(self) -> int:
        return self.p if self.p is not None else 0

    @property
    def scalar_mod(self):
        """Modulus for coordinatewise scalar arithmetic (None over Q)."""
        return self.p

    def _validate(self):
        n = self.dim
        if n < 1:
            raise AlgebraError("dim must be >= 1")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    left = self.mul(self.structure[i][j], self.basis_vec(k))
                    right = self.mul(self.basis_vec(i), self.structure[j][k])
                    if left != right:
                        raise AlgebraError(
                            f"structure constants not associative at ({i},{j},{k})"
                        )
        for i in range(n):
            e = self.basis_vec(i)
            if self.mul(self.unit, e) != e or self.mul(e, self.unit) != e:
                raise AlgebraError("unit vector is not a two-sided identity")

    # -- element arithmetic ------------------------------------------------

    def basis_vec(self, i):
        return tuple(
            la.fnorm(1 if j == i else 0, self.p) for j in range(self.dim)
        )

    def basis(self):
        return [self.basis_vec(i) for i in range(self.dim)]

    def zero(self):
        return la.zero_vec(self.dim, self.p)

    def one(self):
        return self.unit

    def element(self, coords):
        if len(coords) != self.dim:
            raise AlgebraError("coordinate length mismatch")
        return la.vec(coords, self.p)

    def add(self, a, b):
        return la.vadd(a, b, self.p)

    def sub(self, a, b):
        return la.vsub(a, b, self.p)

    def neg(self, a):
        return la.vscale(la.fneg(1, self.p), a, self.p)

    def smul(self, c, a):
        return la.vscale(la.fnorm(c, self.p), a, self.p)

    def int_mul(self, n, a):
        return self.smul(la.fnorm(n, self.p), a)

    def mul(self, a, b):
        out = list(self.zero())
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj == 0:
                    continue
                c = la.fmul(ai, bj, self.p)
                for k, s in enumerate(self.structure[i][j]):
                    if s != 0:
                        out[k] = la.fadd(out[k], la.fmul(c, s, self.p), self.p)
        return tuple(out)

    def is_central(self, z):
        return all(
            self.mul(z, e) == self.mul(e, z) for e in self.basis()
        )

    def random_element(self, rng):
        if self.p is not None:
            return tuple(rng.randrange(self.p) for _ in range(self.dim))
        return tuple(Fraction(rng.randint(-3, 3)) for _ in range(self.dim))

    def left_mult_matrix(self, a):
        """Map v -> a*v in the row-is-image convention."""
        return tuple(self.mul(a, e) for e in self.basis())

    def right_mult_matrix(self, a):
        return tuple(self.mul(e, a) for e in self.basis())

    def __repr__(self):
        field = "Q" if self.p is None else f"F_{self.p}"
        return f"FinAlgebra(dim={self.dim}, field={field})"


@dataclass(frozen=True)
class IdealSubspace:
    """Two-sided ideal stored as an rref basis (canonical, hashable)."""

    parent: FinAlgebra
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        return la.subspace_contains(self.basis, v, self.parent.p)

    def contains_ideal(self, other: "IdealSubspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def is_ideal(self) -> bool:
        A = self.parent
        for v in self.basis:
            for e in A.basis():
                if not self.contains(A.mul(e, v)) or not self.contains(A.mul(v, e)):
                    return False
        return True

    def __eq__(self, other):
        return (
            isinstance(other, IdealSubspace)
            and self.parent is other.parent
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return f"IdealSubspace(dim={self.dim})"


def subspace(A: FinAlgebra, vectors) -> IdealSubspace:
    """Wrap a set of vectors as an (unchecked) IdealSubspace in rref."""
    return IdealSubspace(A, la.span(list(vectors), A.p))


def ideal_generated(A: FinAlgebra, gens) -> IdealSubspace:
    """Smallest two-sided ideal containing gens, by closure iteration."""
    current = la.span(list(gens), A.p)
    while True:
        new_vecs = list(current)
        for v in current:
            for e in A.basis():
                new_vecs.append(A.mul(e, v))
                new_vecs.append(A.mul(v, e))
        closed = la.span(new_vecs, A.p)
        if closed == current:
            return IdealSubspace(A, closed)
        current = closed


def ideal_sum(I: IdealSubspace, J: IdealSubspace) -> IdealSubspace:
    return IdealSubspace(I.parent, la.span(list(I.basis) + list(J.basis), I.parent.p))


def ideal_intersection(I: IdealSubspace, J: IdealSubspace) -> IdealSubspace:
    return IdealSubspace(
        I.parent, la.subspace_intersection(I.basis, J.basis, I.parent.p)
    )


def ideal_product(I: IdealSubspace, J: IdealSubspace) -> IdealSubspace:
    A = I.parent
    prods = [A.mul(u, v) for u in I.basis for v in J.basis]
    return IdealSubspace(A, la.span(prods, A.p)) if prods else subspace(A, [])


def apply_to_ideal(A: FinAlgebra, m, I: IdealSubspace) -> IdealSubspace:
    return subspace(A, [la.apply_map(m, v, A.p) for v in I.basis])


# -- radicals ---------------------------------------------------------------


def radical(A: FinAlgebra) -> IdealSubspace:
    """Largest nilpotent two-sided ideal.

    Over Q: kernel of the trace form (x, y) -> Tr(L_x L_y).  Over F_p:
    the trace form fails in small characteristic, so we use the
    Friedl-Ronyai chain of trace-like kernels computed on integer lifts
    of the left regular representation.
    """
    if A.p is None:
        return _radical_char0(A)
    return _radical_charp(A)


def _radical_char0(A: FinAlgebra) -> IdealSubspace:
    reg = [A.left_mult_matrix(e) for e in A.basis()]
    rows = []
    for Lx in reg:
        row = []
        for Ly in reg:
            prod = la.compose(Lx, Ly, None)
            row.append(sum(prod[i][i] for i in range(A.dim)))
        rows.append(tuple(Fraction(c) for c in row))
    kernel = la.left_kernel(rows, None)
    return IdealSubspace(A, la.span(list(kernel), None))


def _int_lift(matrix, p):
    return [[int(c) % p for c in row] for row in matrix]


def _int_matmul(a, b):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def _int_matpow(m, e):
    n = len(m)
    result = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = m
    while e > 0:
        if e & 1:
            result = _int_matmul(result, base)
        base = _int_matmul(base, base)
        e >>= 1
    return result


def _radical_charp(A: FinAlgebra) -> IdealSubspace:
    p = A.p
    current = tuple(A.basis())  # rref basis of the current subspace
    i = 0
    while p**i <= A.dim:
        q = p**i
        lifted = [
            _int_lift(A.left_mult_matrix(v), p) for v in current
        ]
        rows = []
        for Lx in lifted:
            row = []
            for Ly in lifted:
                power = _int_matpow(_int_matmul(Lx, Ly), q)
                tr = sum(power[t][t] for t in range(A.dim))
                if tr % q != 0:
                    raise AlgebraError("trace-like functional not divisible: invalid input")
                row.append((tr // q) % p)
            rows.append(tuple(row))
        coeff_kernel = la.left_kernel(rows, p)
        vectors = []
        for c in coeff_kernel:
            v = A.zero()
            for cj, basis_vec in zip(c, current, strict=True):
                v = A.add(v, A.smul(cj, basis_vec))
            vectors.append(v)
        current = la.span(vectors, p)
        if not current:
            break
        i += 1
    return IdealSubspace(A, current)


def quotient_algebra(A: FinAlgebra, I: IdealSubspace):
    """Quotient algebra with projection / section maps.

    Returns (B, project, lift) where project maps an element of A to its
    coset coordinates and lift picks the canonical coset representative.
    """
    p = A.p
    basis, pivots = la.rref(I.basis, p) if I.basis else ((), ())
    free_cols = [c for c in range(A.dim) if c not in pivots]
    qdim = len(free_cols)
    if qdim == 0:
        raise AlgebraError("quotient by the whole algebra is the zero ring")

    def project(v):
        residue = la.reduce_vector(basis, pivots, v, p)
        return tuple(residue[c] for c in free_cols)

    def lift(coords):
        v = [la.fnorm(0, p)] * A.dim
        for c, col in zip(coords, free_cols, strict=True):
            v[col] = la.fnorm(c, p)
        return tuple(v)

    structure = []
    for i in range(qdim):
        row = []
        for j in range(qdim):
            prod = A.mul(lift(_unit_coords(qdim, i, p)), lift(_unit_coords(qdim, j, p)))
            row.append(project(prod))
        structure.append(tuple(row))
    B = FinAlgebra(p, qdim, structure, project(A.unit), check=False)
    return B, project, lift


def _unit_coords(n, i, p):
    return tuple(la.fnorm(1 if j == i else 0, p) for j in range(n))


def induced_map(A: FinAlgebra, m, I: IdealSubspace, B, project, lift):
    """Matrix of the map induced on A/I (requires m(I) <= I)."""
    rows = []
    for i in range(B.dim):
        image = la.apply_map(m, lift(_unit_coords(B.dim, i, A.p)), A.p)
        rows.append(project(image))
    return tuple(rows)


def lift_ideal(A: FinAlgebra, Ibar_basis, I: IdealSubspace, lift) -> IdealSubspace:
    vectors = list(I.basis) + [lift(v) for v in Ibar_basis]
    return subspace(A, vectors)


# -- semisimple structure ---------------------------------------------------


def center(A: FinAlgebra) -> tuple:
    """rref basis of the center."""
    residue_rows = []
    for e in A.basis():
        row = []
        for f in A.basis():
            row.extend(A.sub(A.mul(e, f), A.mul(f, e)))
        residue_rows.append(tuple(row))
    return la.left_kernel(residue_rows, A.p)


def _min_poly_of_operator(op_rows, p):
    """Minimal polynomial (sympy Poly) of a linear operator via Krylov."""
    n = len(op_rows)
    ident = la.identity_map(n, p)
    powers = [ident]
    while True:
        powers.append(la.compose(powers[-1], op_rows, p))
        flat = [tuple(itertools.chain.from_iterable(m)) for m in powers]
        coeffs = la.left_kernel(flat, p)
        if coeffs:
            # Lowest-degree dependency: prefer a kernel vector whose last
            # nonzero coordinate is earliest.
            best = min(coeffs, key=lambda c: max(i for i, x in enumerate(c) if x != 0))
            deg = max(i for i, x in enumerate(best) if x != 0)
            lead_inv = la.finv(best[deg], p)
            mono = [la.fmul(lead_inv, c, p) for c in best[: deg + 1]]
            x = sympy.Symbol("x")
            expr = sum(sympy.Rational(c) * x**i if p is None else int(c) * x**i
                       for i, c in enumerate(mono))
            if p is None:
                return sympy.Poly(expr, x, domain="QQ")
            return sympy.Poly(expr, x, modulus=p)


def _poly_eval_on_operator(poly, op_rows, p):
    coeffs = list(reversed(poly.all_coeffs()))  # ascending
    n = len(op_rows)
    acc = tuple(la.zero_vec(n, p) for _ in range(n))
    power = la.identity_map(n, p)
    for c in coeffs:
        c = la.fnorm(Fraction(c) if p is None else int(c), p)
        acc = la.map_add(acc, tuple(la.vscale(c, row, p) for row in power), p)
        power = la.compose(power, op_rows, p)
    return acc


def central_idempotents(A: FinAlgebra) -> list:
    """Centrally primitive idempotents of a semisimple algebra."""
    if radical(A).dim != 0:
        raise AlgebraError("algebra not semisimple")
    z_basis = center(A)
    blocks = [la.span(list(z_basis), A.p)]
    # Repeatedly split blocks of the center using minimal polynomial factors
    # of multiplication operators restricted to the block.
    splitters = list(z_basis)
    progress = True
    while progress:
        progress = False
        new_blocks = []
        for block in blocks:
            split = _try_split_block(A, block, splitters)
            if split is not None:
                new_blocks.extend(split)
                progress = True
            else:
                new_blocks.append(block)
        blocks = new_blocks
    idems = [_block_unit(A, block) for block in blocks]
    return sorted(idems)


def _restrict_operator(A, block, z):
    """Operator of multiplication by z on the span of block, in block coords."""
    basis, pivots = la.rref(block, A.p)
    rows = []
    for v in block:
        image = A.mul(z, v)
        coords = _coords_in_basis(basis, pivots, block, image, A.p)
        rows.append(coords)
    return rows


def _coords_in_basis(basis, pivots, block, v, p):
    # block is rref, so coordinates are read off at pivot columns
    return tuple(v[c] for c in pivots)


def _try_split_block(A, block, splitters):
    if len(block) <= 1:
        return None
    candidates = list(splitters)
    # Products of splitters occasionally separate blocks that single basis
    # elements do not.
    for a, b in itertools.combinations(splitters, 2):
        candidates.append(A.mul(a, b))
    for z in candidates:
        op = _restrict_operator(A, block, z)
        poly = _min_poly_of_operator(op, A.p)
        factors = poly.factor_list()[1]
        if len(factors) <= 1:
            continue
        pieces = []
        for fac, mult in factors:
            fm = fac**mult
            mat = _poly_eval_on_operator(fm, op, A.p)
            coeff_kernel = la.left_kernel(mat, A.p)
            vectors = []
            for c in coeff_kernel:
                v = A.zero()
                for cj, bv in zip(c, block, strict=True):
                    v = A.add(v, A.smul(cj, bv))
                vectors.append(v)
            pieces.append(la.span(vectors, A.p))
        if sum(len(x) for x in pieces) == len(block):
            return pieces
    return None


def _block_unit(A, block):
    """Solve for e in the block with e*v = v for all block basis vectors."""
    p = A.p
    residue_rows = []
    for bv in block:
        row = []
        for v in block:
            row.extend(A.mul(bv, v))
        residue_rows.append(tuple(row))
    target = tuple(itertools.chain.from_iterable(block))
    # Any kernel vector of [rows; target] with nonzero last coordinate
    # expresses target as a combination of the rows.
    kern = la.left_kernel(residue_rows + [target], p)
    for c in kern:
        if c[-1] != 0:
            inv = la.finv(la.fneg(c[-1], p), p)
            e = A.zero()
            for cj, bv in zip(c[:-1], block, strict=True):
                e = A.add(e, A.smul(la.fmul(inv, cj, p), bv))
            if A.mul(e, e) == e:
                return e
    raise AlgebraError("block has no unit: center decomposition failed")


def minimal_primes_semisimple(A: FinAlgebra) -> list[IdealSubspace]:
    """Maximal (= minimal prime) ideals of a semisimple algebra."""
    idems = central_idempotents(A)
    primes = []
    for e in idems:
        vectors = [A.sub(v, A.mul(e, v)) for v in A.basis()]
        primes.append(subspace(A, vectors))
    return sorted(primes, key=lambda I: I.basis)


def is_prime_fd(A: FinAlgebra) -> bool:
    """Prime = zero radical and a single Wedderburn block."""
    if radical(A).dim != 0:
        return False
    return len(central_idempotents(A)) == 1


def minimal_primes_over(A: FinAlgebra, I: IdealSubspace) -> list[IdealSubspace]:
    """Minimal primes containing I, through the semisimple quotient."""
    B, projB, liftB = quotient_algebra(A, I)
    N = radical(B)
    C, projC, liftC = quotient_algebra(B, N)
    primes_C = minimal_primes_semisimple(C)
    primes = []
    for P in primes_C:
        in_B = lift_ideal(B, P.basis, N, liftC)
        in_A = lift_ideal(A, in_B.basis, I, liftB)
        primes.append(in_A)
    return sorted(primes, key=lambda J: J.basis)


# -- sigma machinery --------------------------------------------------------


def is_automorphism(A: FinAlgebra, sigma) -> bool:
    if not la.is_invertible(sigma, A.p):
        return False
    if la.apply_map(sigma, A.unit, A.p) != A.unit:
        return False
    for e in A.basis():
        for f in A.basis():
            lhs = la.apply_map(sigma, A.mul(e, f), A.p)
            rhs = A.mul(la.apply_map(sigma, e, A.p), la.apply_map(sigma, f, A.p))
            if lhs != rhs:
                return False
    return True


def sigma_orbit(I: IdealSubspace, sigma, cap: int = 64) -> list[IdealSubspace]:
    """Distinct ideals sigma^n(I); finite over F_p, capped over Q."""
    A = I.parent
    if not is_automorphism(A, sigma):
        raise AlgebraError("sigma is not an algebra automorphism")
    orbit = [I]
    current = I
    for _ in range(cap):
        current = apply_to_ideal(A, sigma, current)
        if current == I:
            return orbit
        orbit.append(current)
    raise OrbitCapExceeded(f"orbit cap {cap} exceeded")


def is_sigma_stable(I: IdealSubspace, sigma) -> bool:
    A = I.parent
    return all(I.contains(la.apply_map(sigma, v, A.p)) for v in I.basis)


def is_sigma_prime(I: IdealSubspace, sigma, cap: int = 64) -> bool:
    """I semiprime with minimal primes forming one sigma-orbit meeting in I."""
    A = I.parent
    if not is_sigma_stable(I, sigma):
        raise AlgebraError("ideal is not sigma-stable")
    if I.dim == A.dim:
        raise AlgebraError("the whole ring is not a sigma-prime ideal")
    B, projB, _ = quotient_algebra(A, I)
    if radical(B).dim != 0:
        return False
    primes = minimal_primes_over(A, I)
    orbit = sigma_orbit(primes[0], sigma, cap=cap)
    if sorted(orbit, key=lambda J: J.basis) != primes:
        return False
    meet = primes[0]
    for P in primes[1:]:
        meet = ideal_intersection(meet, P)
    return meet == I


def minimal_sigma_primes(
    A: FinAlgebra, sigma, I: IdealSubspace, cap: int = 64
) -> list[IdealSubspace]:
    """Minimal sigma-prime ideals containing I."""
    if not is_sigma_stable(I, sigma):
        raise AlgebraError("ideal is not sigma-stable")
    primes = minimal_primes_over(A, I)
    seen = set()
    results = []
    for P in primes:
        if P in seen:
            continue
        orbit = sigma_orbit(P, sigma, cap=cap)
        seen.update(orbit)
        meet = orbit[0]
        for Q in orbit[1:]:
            meet = ideal_intersection(meet, Q)
        if meet not in results:
            results.append(meet)
    # Only keep the minimal ones among the orbit intersections.
    minimal = [
        J for J in results
        if not any(K is not J and J.contains_ideal(K) for K in results)
    ]
    return sorted(minimal, key=lambda J: J.basis)


# -- convenience constructors ----------------------------------------------


def truncated_poly_algebra(p, n: int) -> FinAlgebra:
    """F_p[X]/(X^n) (or Q[X]/(X^n) for p=None) with basis 1, X, ..., X^(n-1)."""
    structure = []
    for i in range(n):
        row = []
        for j in range(n):
            v = [0] * n
            if i + j < n:
                v[i + j] = 1
            row.append(tuple(v))
        structure.append(tuple(row))
    unit = [1] + [0] * (n - 1)
    return FinAlgebra(p, n, structure, unit)


def product_of_fields(p, n: int) -> FinAlgebra:
    """F_p x ... x F_p (n factors), coordinatewise multiplication."""
    structure = []
    for i in range(n):
        row = []
        for j in range(n):
            v = [0] * n
            if i == j:
                v[i] = 1
            row.append(tuple(v))
        structure.append(tuple(row))
    return FinAlgebra(p, n, structure, [1] * n)


def matrix_algebra(p, n: int) -> FinAlgebra:
    """Full n x n matrix algebra; basis e_{rc} ordered row-major."""
    dim = n * n
    idx = lambda r, c: r * n + c

    structure = []
    for a in range(dim):
        r1, c1 = divmod(a, n)
        row = []
        for b in range(dim):
            r2, c2 = divmod(b, n)
            v = [0] * dim
            if c1 == r2:
                v[idx(r1, c2)] = 1
            row.append(tuple(v))
        structure.append(tuple(row))
    unit = [0] * dim
    for r in range(n):
        unit[idx(r, r)] = 1
    return FinAlgebra(p, dim, structure, unit)


def direct_sum(A: FinAlgebra, B: FinAlgebra) -> FinAlgebra:
    if A.p != B.p:
        raise AlgebraError("field mismatch")
    n, m = A.dim, B.dim
    dim = n + m
    structure = []
    for i in range(dim):
        row = []
        for j in range(dim):
            v = [la.fnorm(0, A.p)] * dim
            if i < n and j < n:
                prod = A.structure[i][j]
                for k in range(n):
                    v[k] = prod[k]
            elif i >= n and j >= n:
                prod = B.structure[i - n][j - n]
                for k in range(m):
                    v[n + k] = prod[k]
            row.append(tuple(v))
        structure.append(tuple(row))
    unit = list(A.unit) + list(B.unit)
    return FinAlgebra(A.p, dim, structure, unit, check=False)
