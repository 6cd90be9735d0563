import random

import pytest

import skewseries.exactla as la
from skewseries.finalg import ideal_generated, product_of_fields, subspace, truncated_poly_algebra
from skewseries.series import SeriesRing
from skewseries.skewder import (
    SkewDerivation,
    SkewDerivationError,
    check_skew_derivation,
    cor36_check,
    delta_n_oracle,
    delta_n_product,
    lemma31_check,
    pth_power,
    sigma_shift_power,
    trinomial_expand,
)

from helpers import cor36_instance, ddx_derivation


def test_check_valid_examples():
    A = truncated_poly_algebra(2, 2)
    assert check_skew_derivation(SkewDerivation.identity(A)).valid
    _, sd = ddx_derivation(2, 2)
    assert check_skew_derivation(sd).valid


def test_check_invalid_char0_derivation():
    A, sd = ddx_derivation(None, 2)
    # Over Q, delta(X) = 1 violates Leibniz at (X, X): delta(X^2) = 2X != 0.
    sigma = la.identity_map(2, None)
    delta = ((0, 0), (1, 0))
    bad = SkewDerivation(A, sigma, delta)
    report = check_skew_derivation(bad)
    assert not report.valid
    assert any(axiom == "Leibniz" and witness == (1, 1) for axiom, witness in report.violations)
    assert sd is not None


def test_q_axioms_checked():
    R = SeriesRing(3, 4)
    sd = SkewDerivation.from_gen_images(R, R.gen(), R.zero(), q=R.one())
    assert check_skew_derivation(sd).valid


def test_pth_power():
    A, sd = ddx_derivation(2, 2)
    m0 = pth_power(sd, 0)
    assert m0.sigma_matrix == sd.sigma_matrix and m0.delta_matrix == sd.delta_matrix
    m1 = pth_power(sd, 1)
    assert m1.delta_matrix == tuple(la.zero_vec(2, 2) for _ in range(2))
    assert check_skew_derivation(m1).valid
    AQ, sdQ = ddx_derivation(None, 3)
    with pytest.raises(SkewDerivationError, match="characteristic p"):
        pth_power(sdQ, 1)
    for m in range(4):
        _, sd3 = ddx_derivation(3, 3)
        assert check_skew_derivation(pth_power(sd3, m)).valid


def test_sigma_shift_power():
    A = product_of_fields(2, 2)
    swap = ((0, 1), (1, 0))
    ident = la.identity_map(2, 2)
    delta = la.map_sub(swap, ident, 2)
    sd = SkewDerivation(A, swap, delta)
    assert check_skew_derivation(sd).valid
    same = sigma_shift_power(sd, 1)
    assert same.sigma_matrix == sd.sigma_matrix
    sq = sigma_shift_power(sd, 2)
    assert sq.sigma_matrix == ident
    assert all(c == 0 for row in sq.delta_matrix for c in row)
    # agrees with pth_power when char = p = 2
    assert pth_power(sd, 1).sigma_matrix == sq.sigma_matrix
    _, ddx = ddx_derivation(2, 2)
    with pytest.raises(SkewDerivationError, match="sigma - id"):
        sigma_shift_power(ddx, 2)


def test_delta_n_product_matches_oracle():
    rng = random.Random(0)
    A, sd = ddx_derivation(3, 3)
    for _ in range(50):
        a, b = A.random_element(rng), A.random_element(rng)
        assert delta_n_product(sd, a, b, 0) == A.mul(a, b)
        expected1 = A.add(A.mul(sd.delta(a), b), A.mul(sd.sigma(a), sd.delta(b)))
        assert delta_n_product(sd, a, b, 1) == expected1
        for n in range(7):
            assert delta_n_product(sd, a, b, n) == delta_n_oracle(sd, A.mul(a, b), n)


def test_trinomial_expand_matches_oracle():
    rng = random.Random(1)
    A = truncated_poly_algebra(2, 4)
    sd = SkewDerivation.from_gen_images(A, A.basis_vec(1), A.basis_vec(3))
    assert check_skew_derivation(sd).valid
    for _ in range(30):
        a, x, b = (A.random_element(rng) for _ in range(3))
        prod = A.mul(A.mul(a, x), b)
        assert trinomial_expand(sd, a, x, b, 0) == prod
        for n in range(1, 5):
            assert trinomial_expand(sd, a, x, b, n) == delta_n_oracle(sd, prod, n)
    AQ, sdQ = ddx_derivation(None, 3)
    with pytest.raises(SkewDerivationError, match="characteristic p"):
        trinomial_expand(sdQ, AQ.one(), AQ.one(), AQ.one(), 2)


def test_cor36_preconditions():
    A, sd = ddx_derivation(2, 2)
    I = ideal_generated(A, [A.basis_vec(1)])
    X = A.basis_vec(1)
    with pytest.raises(SkewDerivationError, match="minimal"):
        cor36_check(sd, I, X, X, A.one(), 0, 0)
    with pytest.raises(SkewDerivationError, match="common component"):
        cor36_check(sd, I, X, X, A.one(), 1, 1)
    with pytest.raises(SkewDerivationError, match="must lie in I"):
        cor36_check(sd, I, A.one(), X, A.one(), 1, 1)


def test_cor36_instance():
    rng = random.Random(2)
    A, sd = cor36_instance()
    assert check_skew_derivation(sd).valid
    I = ideal_generated(A, [A.basis_vec(1), A.basis_vec(2)])
    a, b = A.basis_vec(2), A.basis_vec(1)
    for x in [A.basis_vec(i) for i in range(4)] + [A.random_element(rng) for _ in range(20)]:
        assert cor36_check(sd, I, a, b, x, 1, 2)


def test_lemma31():
    A, sd = ddx_derivation(2, 2)
    I = ideal_generated(A, [A.basis_vec(1)])
    assert lemma31_check(sd, I)  # I + delta(I) = whole algebra
    A2, sd2 = cor36_instance()
    I2 = ideal_generated(A2, [A2.basis_vec(1), A2.basis_vec(2)])
    assert lemma31_check(sd2, I2)
    # random sigma-ideals in a product algebra with the swap automorphism
    B = product_of_fields(2, 2)
    swap = ((0, 1), (1, 0))
    sdB = SkewDerivation(B, swap, la.map_sub(swap, la.identity_map(2, 2), 2))
    zero = subspace(B, [])
    assert lemma31_check(sdB, zero)
    with pytest.raises(SkewDerivationError, match="sigma-stable"):
        lemma31_check(sdB, subspace(B, [B.basis_vec(0)]))


def test_from_gen_images_on_series():
    R = SeriesRing(2, 6)
    sd = SkewDerivation.from_gen_images(R, R.gen(), R.monomial(1, 3))
    assert check_skew_derivation(sd).valid
    assert sd.delta(R.monomial(1, 2)) == R.zero()  # delta(t^2) = 2 t^4 = 0
