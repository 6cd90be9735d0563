import random

import pytest

import skewseries.exactla as la
from skewseries.core import (
    CoreError,
    char0_checks,
    default_cap,
    delta_core,
    delta_pm_core,
    prop39_check,
    stabilization_M,
    theorem_c_procedure,
)
from skewseries.finalg import (
    ideal_generated,
    product_of_fields,
    subspace,
    truncated_poly_algebra,
)
from skewseries.skewder import SkewDerivation, check_skew_derivation

from helpers import ddx_derivation, perm_skew, random_char0_instance


def bg_instance(p):
    """F_p[X]/(X^2), sigma = id, delta = d/dX, I = (X)."""
    A, sd = ddx_derivation(p, 2)
    I = ideal_generated(A, [A.basis_vec(1)])
    return A, sd, I


def swap_skew():
    B = product_of_fields(2, 2)
    swap = ((0, 1), (1, 0))
    delta = la.map_sub(swap, la.identity_map(2, 2), 2)
    return B, SkewDerivation(B, swap, delta)


def test_delta_core_stable_ideal_is_itself():
    A = truncated_poly_algebra(3, 3)
    sd = SkewDerivation.identity(A)
    I = ideal_generated(A, [A.basis_vec(1)])
    assert delta_core(A, sd, I) == I


def test_delta_core_bg_is_zero():
    for p in (2, 3, 5):
        A, sd, I = bg_instance(p)
        assert delta_core(A, sd, I).dim == 0


def test_delta_core_requires_sigma_stable():
    B, sd = swap_skew()
    with pytest.raises(CoreError, match="sigma-stable"):
        delta_core(B, sd, subspace(B, [B.basis_vec(0)]))


def test_delta_core_is_maximal_evidence():
    # any (sigma, delta)-stable ideal inside I lies inside the core
    rng = random.Random(0)
    A, sd = ddx_derivation(2, 4)
    I = ideal_generated(A, [A.basis_vec(1)])
    core = delta_core(A, sd, I)
    for _ in range(30):
        seed = A.random_element(rng)
        K = ideal_generated(A, [seed])
        stable = all(
            I.contains(v) and K.contains(sd.sigma(v)) and K.contains(sd.delta(v))
            for v in K.basis
        )
        if stable:
            assert all(core.contains(v) for v in K.basis)


def test_delta_pm_core():
    A, sd, I = bg_instance(2)
    assert delta_pm_core(A, sd, I, 0) == delta_core(A, sd, I)
    assert delta_pm_core(A, sd, I, 1) == I  # delta^2 = 0
    AQ, sdQ = ddx_derivation(None, 2)
    with pytest.raises(CoreError, match="characteristic p"):
        delta_pm_core(AQ, sdQ, ideal_generated(AQ, [AQ.basis_vec(1)]), 1)


def test_stabilization_bg():
    for p in (2, 3, 5):
        A, sd, I = bg_instance(p)
        report = stabilization_M(A, sd, I)
        assert report.conclusive and report.M == 1
        assert report.chain[0] == (0, 0) and report.chain[1] == (1, 1)
        assert report.core == I
        assert report.flags["is ideal"]
        assert report.flags["sigma^(p^M)-stable"]
        assert report.flags["delta^(p^M)-stable"]


def test_stabilization_trivial_case():
    A = truncated_poly_algebra(3, 3)
    sd = SkewDerivation.identity(A)
    I = ideal_generated(A, [A.basis_vec(1)])
    report = stabilization_M(A, sd, I)
    assert report.M == 0 and report.core == I


def test_stabilization_inconclusive_at_small_cap():
    A, sd, I = bg_instance(2)
    report = stabilization_M(A, sd, I, cap=1)
    # chain is 0, 1 and still moving at the cap
    assert report.M is None and not report.conclusive
    assert "inconclusive" in report.serialize()


def test_core_report_serialize_deterministic():
    A, sd, I = bg_instance(3)
    a = stabilization_M(A, sd, I).serialize()
    b = stabilization_M(A, sd, I).serialize()
    assert a == b
    assert a.splitlines()[0] == "ideal dim: 1"


def test_default_cap():
    assert default_cap(truncated_poly_algebra(2, 2)) == 4
    assert default_cap(truncated_poly_algebra(2, 20)) == 7


def test_prop39():
    # trivially true: delta = 0, I sigma-prime with M = 0
    B, sd = swap_skew()
    zero_delta = SkewDerivation(B, sd.sigma_matrix, tuple(la.zero_vec(2, 2) for _ in range(2)))
    zero = subspace(B, [])
    assert prop39_check(B, zero_delta, zero)
    A, sdA, I = bg_instance(2)
    with pytest.raises(CoreError, match="hypothesis failed"):
        prop39_check(A, sdA, I)  # I is not sigma-prime (A/I story aside, M=1)


def test_theorem_c_bg():
    for p in (2, 3):
        A, sd, I = bg_instance(p)
        J, M, flags = theorem_c_procedure(A, sd, I)
        assert M == 1
        assert J == I
        assert flags["minimal sigma^(p^M)-prime"]
        assert flags["I is the sigma-orbit intersection of J"]
        assert flags["delta^(p^M)(J) <= J"]
        assert not flags["inconclusive"]


def test_theorem_c_delta_zero():
    A = truncated_poly_algebra(2, 2)
    sd = SkewDerivation.identity(A)
    I = ideal_generated(A, [A.basis_vec(1)])
    J, M, flags = theorem_c_procedure(A, sd, I)
    assert J == I and M == 0
    assert all(flags[k] for k in flags if k not in ("inconclusive", "reports"))


def test_theorem_c_swap():
    B, sd = swap_skew()
    zero = subspace(B, [])
    J, M, flags = theorem_c_procedure(B, sd, zero)
    assert flags["minimal sigma^(p^M)-prime"]
    assert flags["I is the sigma-orbit intersection of J"]
    assert flags["delta^(p^M)(J) <= J"]


def test_theorem_c_rejects_non_minimal():
    A, sd, I = bg_instance(2)
    whole = ideal_generated(A, [A.one()])
    with pytest.raises(CoreError, match="minimal sigma-prime"):
        theorem_c_procedure(A, sd, whole)
    AQ, sdQ = ddx_derivation(None, 2)
    with pytest.raises(CoreError, match="characteristic p"):
        theorem_c_procedure(AQ, sdQ, ideal_generated(AQ, [AQ.basis_vec(1)]))


def test_char0_checks():
    A = truncated_poly_algebra(None, 3)
    sd = SkewDerivation.from_gen_images(A, A.basis_vec(1), A.basis_vec(2))
    assert check_skew_derivation(sd).valid
    report = char0_checks(A, sd)
    assert report["radical preserved"] and report["sigma-primes preserved"]
    B, sdB = perm_skew(2, [1, 0], 1)
    report = char0_checks(B, sdB)
    assert report["radical preserved"] and report["sigma-primes preserved"]
    Ap, sdp = ddx_derivation(3, 3)
    with pytest.raises(CoreError, match="characteristic 0"):
        char0_checks(Ap, sdp)
    A2, _ = ddx_derivation(None, 2)
    A = A2
    sd = SkewDerivation.identity(A)
    minus = SkewDerivation(
        A,
        sd.sigma_matrix,
        tuple(la.zero_vec(2, None) for _ in range(2)),
        q=A.smul(-1, A.one()),
    )
    with pytest.raises(CoreError, match="root of unity"):
        char0_checks(A, minus)


def test_char0_random_instances():
    rng = random.Random(1)
    for _ in range(30):
        A, sd = random_char0_instance(rng)
        assert check_skew_derivation(sd).valid
        report = char0_checks(A, sd)
        assert report["radical preserved"], report["witnesses"]
        assert report["sigma-primes preserved"], report["witnesses"]
