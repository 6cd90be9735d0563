"""Shared constructions for the test suite."""

from fractions import Fraction

import skewseries.exactla as la
from skewseries.finalg import FinAlgebra, product_of_fields, truncated_poly_algebra
from skewseries.skewder import SkewDerivation


def ddx_derivation(p, n):
    """(id, d/dX) on F_p[X]/(X^n) (or Q for p=None)."""
    A = truncated_poly_algebra(p, n)
    return A, SkewDerivation.from_gen_images(A, A.basis_vec(1), A.one())


def exterior_square_f2():
    """F_2[Y,Z]/(Y^2, Z^2) with basis 1, Y, Z, YZ."""
    rep = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)}
    inv = {v: k for k, v in rep.items()}

    def mul_basis(i, j):
        v = [0] * 4
        y = rep[i][0] + rep[j][0]
        z = rep[i][1] + rep[j][1]
        if y < 2 and z < 2:
            v[inv[(y, z)]] = 1
        return tuple(v)

    structure = [[mul_basis(i, j) for j in range(4)] for i in range(4)]
    return FinAlgebra(2, 4, structure, (1, 0, 0, 0))


def cor36_instance():
    """Valid instance for the delta^(r+s) congruence with r=1, s=2.

    sigma = id, delta(Y) = Z, delta(Z) = 1 on F_2[Y,Z]/(Y^2, Z^2);
    then a = Z escapes (Y, Z) at exponent 1 and b = Y at exponent 2.
    """
    A = exterior_square_f2()
    sigma = la.identity_map(4, 2)
    delta = ((0, 0, 0, 0), (0, 0, 1, 0), (1, 0, 0, 0), (0, 1, 0, 0))
    return A, SkewDerivation(A, sigma, delta)


def perm_skew(n, perm, lam):
    """Q^n with sigma the permutation of coordinates and delta = lam(sigma - id)."""
    A = product_of_fields(None, n)
    sigma = tuple(A.basis_vec(perm[i]) for i in range(n))
    ident = la.identity_map(n, None)
    delta = tuple(
        tuple(Fraction(lam) * (s - i) for s, i in zip(rs, ri))
        for rs, ri in zip(sigma, ident)
    )
    return A, SkewDerivation(A, sigma, delta)


def random_char0_instance(rng):
    """A random valid (A, sd) over Q with dim <= 5, three families."""
    kind = rng.randrange(3)
    if kind == 0:
        n = rng.randint(2, 5)
        perm = list(range(n))
        rng.shuffle(perm)
        return perm_skew(n, perm, rng.randint(-3, 3))
    if kind == 1:
        n = rng.randint(2, 5)
        A = truncated_poly_algebra(None, n)
        j = rng.randint(1, n - 1)
        beta = Fraction(rng.randint(-3, 3))
        dg = la.vscale(beta, A.basis_vec(j), None)
        return A, SkewDerivation.from_gen_images(A, A.basis_vec(1), dg)
    n = rng.randint(2, 3)
    A = truncated_poly_algebra(None, n)
    c = Fraction(rng.choice([1, 2, -1, 3]))
    sg = la.vscale(c, A.basis_vec(1), None)
    lam = Fraction(rng.randint(-2, 2))
    sigma = SkewDerivation.from_gen_images(A, sg, A.zero()).sigma_matrix
    ident = la.identity_map(n, None)
    delta = tuple(
        tuple(lam * (s - i) for s, i in zip(rs, ri))
        for rs, ri in zip(sigma, ident)
    )
    return A, SkewDerivation(A, sigma, delta)
