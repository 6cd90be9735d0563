"""Exact linear algebra over Q (Fraction) and prime fields F_p.

Vectors are tuples of scalars, matrices ("maps") are tuples of rows where
row j is the image of the j-th basis vector.  All arithmetic is exact;
the field is selected by the parameter ``p`` (a prime, or None for Q).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Scalar = int | Fraction
Vector = tuple
Matrix = tuple


def fnorm(c, p):
    if p is None:
        return c if isinstance(c, Fraction) else Fraction(c)
    return c % p


def fadd(a, b, p):
    return a + b if p is None else (a + b) % p


def fmul(a, b, p):
    return a * b if p is None else (a * b) % p


def fneg(a, p):
    return -a if p is None else (-a) % p


def finv(a, p):
    if p is None:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / Fraction(a)
    a = a % p
    if a == 0:
        raise ZeroDivisionError("inverse of zero mod p")
    return pow(a, p - 2, p)


def vec(entries, p) -> Vector:
    return tuple(fnorm(c, p) for c in entries)


def zero_vec(n, p) -> Vector:
    return tuple(fnorm(0, p) for _ in range(n))


def vadd(u, v, p) -> Vector:
    return tuple(fadd(a, b, p) for a, b in zip(u, v, strict=True))


def vsub(u, v, p) -> Vector:
    return tuple(fadd(a, fneg(b, p), p) for a, b in zip(u, v, strict=True))


def vscale(c, v, p) -> Vector:
    return tuple(fmul(c, a, p) for a in v)


def is_zero_vec(v) -> bool:
    return all(c == 0 for c in v)


def apply_map(m: Matrix, v: Vector, p) -> Vector:
    """Image of v under the map whose j-th row is the image of e_j."""
    n = len(m[0]) if m else 0
    out = list(zero_vec(n, p))
    for cj, row in zip(v, m, strict=True):
        if cj == 0:
            continue
        for i, ri in enumerate(row):
            out[i] = fadd(out[i], fmul(cj, ri, p), p)
    return tuple(out)


def identity_map(n, p) -> Matrix:
    one = fnorm(1, p)
    zero = fnorm(0, p)
    return tuple(tuple(one if i == j else zero for i in range(n)) for j in range(n))


def compose(first: Matrix, then: Matrix, p) -> Matrix:
    """Map sending v to then(first(v))."""
    return tuple(apply_map(then, row, p) for row in first)


def map_power(m: Matrix, k: int, p) -> Matrix:
    result = identity_map(len(m), p)
    base = m
    while k > 0:
        if k & 1:
            result = compose(result, base, p)
        base = compose(base, base, p)
        k >>= 1
    return result


def map_add(a: Matrix, b: Matrix, p) -> Matrix:
    return tuple(vadd(ra, rb, p) for ra, rb in zip(a, b, strict=True))


def map_sub(a: Matrix, b: Matrix, p) -> Matrix:
    return tuple(vsub(ra, rb, p) for ra, rb in zip(a, b, strict=True))


def rref(rows: Iterable[Vector], p) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Reduced row echelon form; returns (rows, pivot columns).

    Zero rows are dropped, pivots are 1, pivot columns are cleared, and
    rows are ordered by pivot column, so the result is a canonical form
    for the row space.
    """
    work = [list(vec(r, p)) for r in rows]
    pivots: list[int] = []
    out: list[list] = []
    ncols = len(work[0]) if work else 0
    col = 0
    while work and col < ncols:
        pivot_row = None
        for r in work:
            if r[col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            col += 1
            continue
        work.remove(pivot_row)
        inv = finv(pivot_row[col], p)
        pivot_row = [fmul(inv, c, p) for c in pivot_row]
        for r in work:
            if r[col] != 0:
                f = r[col]
                for i in range(ncols):
                    r[i] = fadd(r[i], fneg(fmul(f, pivot_row[i], p), p), p)
        for r in out:
            if r[col] != 0:
                f = r[col]
                for i in range(ncols):
                    r[i] = fadd(r[i], fneg(fmul(f, pivot_row[i], p), p), p)
        out.append(pivot_row)
        pivots.append(col)
        col += 1
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return (
        tuple(tuple(out[i]) for i in order),
        tuple(pivots[i] for i in order),
    )


def span(vectors: Iterable[Vector], p) -> tuple[Vector, ...]:
    rows, _ = rref(vectors, p)
    return rows


def reduce_vector(basis: Sequence[Vector], pivots: Sequence[int], v: Vector, p) -> Vector:
    """Residue of v modulo the row space (basis must be in rref)."""
    r = list(vec(v, p))
    for row, c in zip(basis, pivots, strict=True):
        if r[c] != 0:
            f = r[c]
            for i in range(len(r)):
                r[i] = fadd(r[i], fneg(fmul(f, row[i], p), p), p)
    return tuple(r)


def contains(basis: Sequence[Vector], pivots: Sequence[int], v: Vector, p) -> bool:
    return is_zero_vec(reduce_vector(basis, pivots, v, p))


def subspace_contains(basis: Sequence[Vector], v: Vector, p) -> bool:
    b, piv = rref(basis, p)
    return contains(b, piv, v, p)


def subspace_eq(a: Iterable[Vector], b: Iterable[Vector], p) -> bool:
    return span(a, p) == span(b, p)


def left_kernel(rows: Sequence[Vector], p) -> tuple[Vector, ...]:
    """Basis (rref) of {x : sum_j x_j rows[j] = 0}."""
    nrows = len(rows)
    if nrows == 0:
        return ()
    ncols = len(rows[0])
    # Solve by rref of the transpose-augmented system: track coordinates.
    # Augment each row with an identity tail, reduce, read off zero rows.
    aug = []
    for j, r in enumerate(rows):
        tail = [fnorm(1, p) if i == j else fnorm(0, p) for i in range(nrows)]
        aug.append(tuple(vec(r, p)) + tuple(tail))
    # Gaussian elimination restricted to the first ncols columns.
    work = [list(r) for r in aug]
    pivot_cols: list[int] = []
    done: list[list] = []
    for col in range(ncols):
        pivot_row = None
        for r in work:
            if r[col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        work.remove(pivot_row)
        inv = finv(pivot_row[col], p)
        pivot_row = [fmul(inv, c, p) for c in pivot_row]
        for r in work:
            if r[col] != 0:
                f = r[col]
                for i in range(len(r)):
                    r[i] = fadd(r[i], fneg(fmul(f, pivot_row[i], p), p), p)
        done.append(pivot_row)
        pivot_cols.append(col)
    kernel = [tuple(r[ncols:]) for r in work]
    return span(kernel, p) if kernel else ()


def subspace_intersection(a: Sequence[Vector], b: Sequence[Vector], p) -> tuple[Vector, ...]:
    """rref basis of the intersection of two row spaces."""
    a = span(a, p)
    b_basis, b_piv = rref(b, p)
    if not a:
        return ()
    residues = [reduce_vector(b_basis, b_piv, v, p) for v in a]
    coeffs = left_kernel(residues, p)
    vectors = []
    for c in coeffs:
        v = zero_vec(len(a[0]), p)
        for cj, row in zip(c, a, strict=True):
            if cj != 0:
                v = vadd(v, vscale(cj, row, p), p)
        vectors.append(v)
    return span(vectors, p)


def preimage(m: Matrix, target_basis: Sequence[Vector], p) -> tuple[Vector, ...]:
    """rref basis of {v : m(v) lies in the span of target_basis}."""
    basis, piv = rref(target_basis, p)
    residues = [reduce_vector(basis, piv, row, p) for row in m]
    return left_kernel(residues, p)


def is_invertible(m: Matrix, p) -> bool:
    if p is None or _is_prime_modulus(p):
        rows, _ = rref(m, p)
        return len(rows) == len(m)
    # Z/p^k: invertible iff invertible modulo the prime.
    q = _prime_of(p)
    rows, _ = rref(tuple(tuple(c % q for c in row) for row in m), q)
    return len(rows) == len(m)


def _is_prime_modulus(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _prime_of(m: int) -> int:
    d = 2
    while d * d <= m:
        if m % d == 0:
            return d
        d += 1
    return m
