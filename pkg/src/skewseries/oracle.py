"""Free symbolic expansion oracle for the delta-power formulas.

Words are tuples of decorated atoms (name, i, j), each standing for
delta^i sigma^j applied to a formal symbol; the decoration is valid
because sigma and delta are assumed to commute.  Expressions are maps
from words to exact integer coefficients.  Expanding delta^n of a short
word from first principles (iterated two-term Leibniz) and collecting
terms gives an independent derivation of both the binomial product
formula and the carry-free trinomial coefficients.
"""

from __future__ import annotations

import math

from .coeffcore import alpha_coeff, multinomial, trinomial_indices


def word(*names) -> dict:
    """The expression consisting of the single undecorated word."""
    return {tuple((name, 0, 0) for name in names): 1}


def sigma_word(w):
    return tuple((name, i, j + 1) for name, i, j in w)


def symbolic_delta(expr: dict) -> dict:
    """Apply delta across each word by the twisted Leibniz rule.

    delta(u1 u2 ... un) = sum_k sigma(u1)...sigma(u_{k-1}) delta(u_k)
    u_{k+1} ... un, with sigma and delta absorbed into decorations.
    """
    out: dict = {}
    for w, c in expr.items():
        for k in range(len(w)):
            head = tuple((name, i, j + 1) for name, i, j in w[:k])
            name, i, j = w[k]
            new_word = head + ((name, i + 1, j),) + w[k + 1 :]
            out[new_word] = out.get(new_word, 0) + c
    return {w: c for w, c in out.items() if c != 0}


def symbolic_delta_n(expr: dict, n: int) -> dict:
    for _ in range(n):
        expr = symbolic_delta(expr)
    return expr


def reduce_mod(expr: dict, p: int) -> dict:
    out = {w: c % p for w, c in expr.items()}
    return {w: c for w, c in out.items() if c != 0}


def evaluate(expr: dict, sd, assignment: dict):
    """Substitute concrete elements and maps into a symbolic expression."""
    ring = sd.ring
    total = ring.zero()
    for w, c in expr.items():
        prod = ring.one()
        for name, i, j in w:
            atom = sd.apply_delta_pow(sd.apply_sigma_pow(assignment[name], j), i)
            prod = ring.mul(prod, atom)
        total = ring.add(total, ring.int_mul(c, prod))
    return total


def binomial_certify(n_max: int) -> bool:
    """delta^n(ab) collected over Z is exactly the binomial sum."""
    for n in range(n_max + 1):
        expr = symbolic_delta_n(word("a", "b"), n)
        expected = {}
        for k in range(n + 1):
            w = (("a", k, n - k), ("b", n - k, 0))
            expected[w] = math.comb(n, k)
        expected = {w: c for w, c in expected.items() if c != 0}
        if expr != expected:
            return False
    return True


def certify_alpha_table(p: int, n_max: int):
    """Expand delta^n(axb) mod p and certify support and coefficients.

    Returns (table_text, ok); a mismatch raises with the offending
    (n, i, j, k) so a silent disagreement is impossible.
    """
    lines = [f"alpha table p={p} n_max={n_max}"]
    for n in range(n_max + 1):
        expr = reduce_mod(symbolic_delta_n(word("a", "x", "b"), n), p)
        expected = {}
        for i, j, k in trinomial_indices(n, p):
            w = (("a", i, n - i), ("x", j, k), ("b", k, 0))
            expected[w] = alpha_coeff(i, j, k, p)
        if expr != expected:
            for w in sorted(set(expr) | set(expected)):
                if expr.get(w) != expected.get(w):
                    (_, i, _), (_, j, k2), _ = w
                    raise AssertionError(
                        f"alpha certification failed at n={n}, (i,j,k)=({i},{j},{k2}): "
                        f"symbolic {expr.get(w, 0)} vs closed form {expected.get(w, 0)}"
                    )
        for i, j, k in trinomial_indices(n, p):
            lines.append(f"n={n} i={i} j={j} k={k} alpha={alpha_coeff(i, j, k, p)}")
    return "\n".join(lines) + "\n", True


def lucas_consistency(p: int, n_max: int) -> bool:
    """alpha_coeff agrees with the exact integer multinomial mod p."""
    for n in range(n_max + 1):
        for i, j, k in trinomial_indices(n, p):
            if alpha_coeff(i, j, k, p) != multinomial(n, i, j, k) % p:
                return False
    return True
