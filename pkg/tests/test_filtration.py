import random

import pytest
from hypothesis import given, settings, strategies as st

import skewseries.exactla as la
from skewseries.coeffcore import ExtInt, INFINITY
from skewseries.filtration import (
    AdicFiltration,
    ChainFiltration,
    FiltrationError,
    assoc_graded,
    check_axioms,
    endo_degree,
    gr_prime_implies_prime,
    is_compatible,
    lemma16_check,
    quotient_filtration,
)
from skewseries.finalg import ideal_generated, is_prime_fd, matrix_algebra, truncated_poly_algebra
from skewseries.series import SeriesRing
from skewseries.skewder import SkewDerivation

from helpers import ddx_derivation


def x_adic_chain(A, n):
    """X-adic chain on F_p[X]/(X^n)."""
    levels = [[A.basis_vec(i) for i in range(j, n)] for j in range(n)]
    return ChainFiltration(A, levels + [[]])


def test_values():
    R = SeriesRing(2, 6)
    w = AdicFiltration(R)
    assert w.value(R.zero()) == INFINITY
    for k in range(6):
        assert w.value(R.monomial(1, k)) == ExtInt(k)
    Z = SeriesRing(3, 1, k=3)
    wz = AdicFiltration(Z)
    assert wz.value(Z.element([3])) == ExtInt(1)
    A = truncated_poly_algebra(2, 4)
    wc = x_adic_chain(A, 4)
    assert wc.value(A.basis_vec(2)) == ExtInt(2)
    assert wc.value(A.zero()) == INFINITY


def test_chain_validation():
    A = truncated_poly_algebra(2, 2)
    with pytest.raises(FiltrationError, match="whole algebra"):
        ChainFiltration(A, [[A.basis_vec(1)], []])
    with pytest.raises(FiltrationError, match="separated"):
        ChainFiltration(A, [A.basis(), [A.basis_vec(1)]])
    with pytest.raises(FiltrationError, match="nested"):
        ChainFiltration(A, [A.basis(), [A.basis_vec(1)], [A.basis_vec(0)], []])


def test_check_axioms():
    rng = random.Random(0)
    R = SeriesRing(3, 5)
    assert check_axioms(AdicFiltration(R), samples=30, rng=rng).valid
    A = truncated_poly_algebra(2, 3)
    assert check_axioms(x_adic_chain(A, 3), samples=30, rng=rng).valid
    # Bad chain: F_1 = whole algebra, so w(1) = 1 but w(1*1) = 1 < 2.
    bad = ChainFiltration(A, [A.basis(), A.basis(), []])
    report = check_axioms(bad)
    assert not report.valid
    assert any("w(xy)" in axiom for axiom, _ in report.violations)


@settings(max_examples=50)
@given(st.lists(st.integers(min_value=0, max_value=8), min_size=5, max_size=5),
       st.lists(st.integers(min_value=0, max_value=8), min_size=5, max_size=5))
def test_adic_axioms_property(xs, ys):
    R = SeriesRing(3, 5)
    w = AdicFiltration(R)
    a, b = R.element(xs), R.element(ys)
    assert not w.value(R.add(a, b)) < min(w.value(a), w.value(b))
    assert not w.value(R.mul(a, b)) < w.value(a) + w.value(b)


def test_endo_degree():
    R = SeriesRing(3, 9)
    w = AdicFiltration(R)
    zero_map = tuple(la.zero_vec(9, 3) for _ in range(9))
    assert endo_degree(w, zero_map) == INFINITY
    assert endo_degree(w, la.identity_map(9, 3)) == ExtInt(0)
    sd = SkewDerivation.from_gen_images(R, R.gen(), R.monomial(1, 4))
    assert endo_degree(w, sd.delta_matrix) == ExtInt(3)  # delta(t) = t^(p+1)


def test_is_compatible():
    R = SeriesRing(2, 6)
    w = AdicFiltration(R)
    assert is_compatible(w, SkewDerivation.identity(R))
    sd = SkewDerivation.from_gen_images(R, R.gen(), R.monomial(1, 3))
    assert is_compatible(w, sd)
    A, ddx = ddx_derivation(2, 2)
    wc = x_adic_chain(A, 2)
    assert not is_compatible(wc, ddx)


def test_sigma_preserves_symbols_when_compatible():
    from skewseries.sps import iwasawa_demo

    S = iwasawa_demo(2, 8, 4)
    w, sd = S.u, S.sd
    rng = random.Random(1)
    for _ in range(30):
        e = S.base.random_element(rng)
        if e == S.base.zero():
            continue
        assert w.value(sd.sigma(e)) == w.value(e)
        assert w.value(S.base.sub(sd.sigma(e), e)) > w.value(e)


def test_lemma16():
    base = SeriesRing(2, 4, k=4)
    sig_t = base.smul(3, base.gen())  # sigma(t) = (1+p) t
    sd = SkewDerivation.from_gen_images(base, sig_t, base.sub(sig_t, base.gen()))
    w = AdicFiltration(base)
    for n in range(3):
        assert lemma16_check(w, sd, n)
    # sigma of p-power order: identity is of order 1 = p^0
    ident_sd = SkewDerivation.identity(base)
    assert lemma16_check(w, ident_sd, 5)
    R = SeriesRing(2, 4)  # k = 1: w(p) = infinity >= 1 still fine
    sd2 = SkewDerivation.identity(R)
    assert lemma16_check(AdicFiltration(R), sd2, 2)
    bad = SkewDerivation.from_gen_images(base, base.gen(), base.monomial(1, 2))
    with pytest.raises(FiltrationError, match="delta != sigma - id"):
        lemma16_check(w, bad, 1)


def test_assoc_graded_series():
    R = SeriesRing(3, 5)
    w = AdicFiltration(R)
    gr = assoc_graded(w, range(5))
    assert [gr.dim(d) for d in range(5)] == [1] * 5
    d, c = gr.symbol(R.monomial(2, 3))
    assert d == 3 and c == (2,)
    # symbol multiplicativity: gr(t) * gr(t) = gr(t^2)
    assert gr.mul(1, (1,), 1, (1,)) == gr.symbol(R.monomial(1, 2))
    with pytest.raises(FiltrationError, match="window"):
        assoc_graded(w, range(20))


def test_assoc_graded_chain_realizes_algebra():
    A = truncated_poly_algebra(2, 2)
    w = x_adic_chain(A, 2)
    gr = assoc_graded(w, range(3))
    assert gr.dim(0) == 1 and gr.dim(1) == 1
    G = gr.to_algebra()
    # gr of F_2[X]/(X^2) along the X-adic chain is the same algebra, graded.
    assert G.dim == 2
    assert G.mul(G.basis_vec(1), G.basis_vec(1)) == G.zero()


def test_gr_prime_lemma_on_corpus():
    A = truncated_poly_algebra(2, 3)
    assert gr_prime_implies_prime(x_adic_chain(A, 3))
    M = matrix_algebra(2, 2)
    trivial = ChainFiltration(M, [M.basis(), []])
    gr = assoc_graded(trivial, range(1))
    assert is_prime_fd(gr.to_algebra()) == is_prime_fd(M)
    assert gr_prime_implies_prime(trivial)


def test_quotient_filtration():
    A = truncated_poly_algebra(2, 4)
    w = x_adic_chain(A, 4)
    I = ideal_generated(A, [A.basis_vec(2)])
    wbar, B, project, lift = quotient_filtration(w, I)
    assert wbar.value(project(A.basis_vec(1))) == ExtInt(1)
    assert wbar.value(project(A.basis_vec(2))) == INFINITY
    assert check_axioms(wbar).valid
    zero = ideal_generated(A, [])
    wsame, _, project0, _ = quotient_filtration(w, zero)
    for i in range(4):
        assert wsame.value(project0(A.basis_vec(i))) == w.value(A.basis_vec(i))


def test_quotient_filtration_keeps_compatibility():
    # sigma = id, delta = 0 is compatible; so is any induced pair.
    A = truncated_poly_algebra(2, 4)
    w = x_adic_chain(A, 4)
    sd = SkewDerivation.identity(A)
    I = ideal_generated(A, [A.basis_vec(2)])
    from skewseries.finalg import induced_map, quotient_algebra

    wbar, B, project, lift = quotient_filtration(w, I)
    sig = induced_map(A, sd.sigma_matrix, I, B, project, lift)
    dlt = induced_map(A, sd.delta_matrix, I, B, project, lift)
    assert is_compatible(wbar, SkewDerivation(B, sig, dlt))
