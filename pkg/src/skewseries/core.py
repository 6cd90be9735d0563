"""Delta-cores, their p-power stabilization, and the Theorem-C procedure.

The delta-core of a sigma-ideal I is the largest (sigma, delta)-ideal
inside I; raising the pair to p-th powers in characteristic p gives an
ascending chain of cores that stabilizes.  On top of that sit the
sigma-primeness statement for stabilized cores and the constructive
procedure producing, from a minimal sigma-prime I, an ideal J with
delta^(p^M)(J) contained in J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import exactla as la
from .coeffcore import is_prime
from .finalg import (
    AlgebraError,
    FinAlgebra,
    IdealSubspace,
    apply_to_ideal,
    ideal_intersection,
    is_sigma_prime,
    is_sigma_stable,
    minimal_primes_over,
    minimal_sigma_primes,
    radical,
    sigma_orbit,
    subspace,
)
from .skewder import SkewDerivation, pth_power


class CoreError(ValueError):
    pass


def default_cap(A: FinAlgebra) -> int:
    p = A.p if A.p is not None else 2
    return max(4, math.ceil(math.log(max(A.dim, 2), p)) + 2)


def delta_core(A: FinAlgebra, sd: SkewDerivation, I: IdealSubspace) -> IdealSubspace:
    """Largest (sigma, delta)-ideal contained in the sigma-ideal I.

    Greatest fixed point of K -> K meet sigma^{-1}K meet delta^{-1}K meet
    the multiplication preimages, computed by exact linear algebra.
    """
    if not is_sigma_stable(I, sd.sigma_matrix):
        raise CoreError("ideal is not sigma-stable")
    p = A.p
    mult_maps = [A.left_mult_matrix(e) for e in A.basis()]
    mult_maps += [A.right_mult_matrix(e) for e in A.basis()]
    current = I.basis
    while True:
        if not current:
            break
        new = current
        for m in [sd.sigma_matrix, sd.delta_matrix] + mult_maps:
            pre = la.preimage(m, current, p)
            new = la.subspace_intersection(new, pre, p)
            if not new:
                break
        if new == current:
            break
        current = new
    return IdealSubspace(A, la.span(list(current), p) if current else ())


def delta_pm_core(A: FinAlgebra, sd: SkewDerivation, I: IdealSubspace, m: int) -> IdealSubspace:
    """Largest (sigma^(p^m), delta^(p^m))-ideal contained in I."""
    if A.char == 0 or not is_prime(A.char):
        raise CoreError("requires characteristic p")
    return delta_core(A, pth_power(sd, m), I)


@dataclass
class CoreReport:
    ideal_dim: int
    chain: list = field(default_factory=list)  # (m, core dimension)
    M: int | None = None
    cap: int = 0
    core: IdealSubspace | None = None
    flags: dict = field(default_factory=dict)

    @property
    def conclusive(self) -> bool:
        return self.M is not None

    def serialize(self) -> str:
        lines = [f"ideal dim: {self.ideal_dim}"]
        lines.append("chain: " + " ".join(f"m={m}:dim={d}" for m, d in self.chain))
        if self.M is None:
            lines.append(f"M: inconclusive at cap {self.cap}")
        else:
            lines.append(f"M: {self.M}")
        if self.core is not None:
            lines.append(f"core dim: {self.core.dim}")
        for name in sorted(self.flags):
            lines.append(f"{name}: {self.flags[name]}")
        return "\n".join(lines)


def stabilization_M(
    A: FinAlgebra, sd: SkewDerivation, I: IdealSubspace, cap: int | None = None
) -> CoreReport:
    """Ascending chain of delta^(p^m)-cores and its first stable exponent.

    M is claimed only when the tail of the chain up to the cap is
    constant; otherwise the report is flagged inconclusive.
    """
    if cap is None:
        cap = default_cap(A)
    report = CoreReport(ideal_dim=I.dim, cap=cap)
    cores = []
    for m in range(cap + 1):
        core_m = delta_pm_core(A, sd, I, m)
        cores.append(core_m)
        report.chain.append((m, core_m.dim))
    for earlier, later in zip(cores, cores[1:]):
        if not later.contains_ideal(earlier):
            raise CoreError("core chain is not ascending: implementation error")
    M = None
    for m in range(cap, -1, -1):
        if cores[m] == cores[cap]:
            M = m
        else:
            break
    if M == cap and cap > 0 and cores[cap] != cores[cap - 1]:
        M = None  # still moving at the cap
    report.M = M
    final = cores[cap]
    report.core = final
    e = A.char ** (M if M is not None else cap)
    sd_M = SkewDerivation(A, sd.sigma_pow(e), sd.delta_pow(e), q=sd.q)
    report.flags["is ideal"] = final.is_ideal()
    report.flags["sigma^(p^M)-stable"] = is_sigma_stable(final, sd_M.sigma_matrix)
    report.flags["delta^(p^M)-stable"] = all(
        final.contains(la.apply_map(sd_M.delta_matrix, v, A.p)) for v in final.basis
    )
    try:
        report.flags["sigma^(p^M)-prime"] = is_sigma_prime(final, sd_M.sigma_matrix)
    except AlgebraError:
        report.flags["sigma^(p^M)-prime"] = None
    return report


def prop39_check(
    A: FinAlgebra, sd: SkewDerivation, I: IdealSubspace, cap: int | None = None
) -> bool:
    """Stabilized delta-cores of sigma-prime ideals are sigma-prime.

    Hypothesis failures (I not sigma-prime, or M != 0) raise CoreError;
    a False return refutes the conclusion only.
    """
    if not is_sigma_prime(I, sd.sigma_matrix):
        raise CoreError("hypothesis failed: I is not sigma-prime")
    report = stabilization_M(A, sd, I, cap=cap)
    if report.M != 0:
        raise CoreError(
            f"hypothesis failed: delta-core is not the delta^(p^infinity)-core (M={report.M})"
        )
    core = delta_core(A, sd, I)
    try:
        return is_sigma_prime(core, sd.sigma_matrix)
    except AlgebraError as exc:
        raise CoreError(f"conclusion not decidable: {exc}") from exc


def theorem_c_procedure(
    A: FinAlgebra, sd: SkewDerivation, I: IdealSubspace, cap: int | None = None
):
    """Constructive procedure: from a minimal sigma-prime I, produce (J, M).

    Follows the inductive construction: fix the lexicographically least
    minimal prime P over I, then iterate I_{j+1} = the intersection of
    the sigma^(p^(M_j))-orbit of P, with M_j the stabilization exponent
    of I_j (made nondecreasing).  Verifies the three conclusions from
    scratch: J is a minimal sigma^(p^M)-prime, I is the intersection of
    the sigma-orbit of J, and delta^(p^M)(J) <= J.
    """
    p = A.char
    if p == 0 or not is_prime(p):
        raise CoreError("requires characteristic p")
    if not sd.commuting:
        raise CoreError("requires sigma delta = delta sigma")
    if cap is None:
        cap = default_cap(A)
    zero = subspace(A, [])
    if I not in minimal_sigma_primes(A, sd.sigma_matrix, zero):
        raise CoreError("I is not a minimal sigma-prime ideal")
    P = minimal_primes_over(A, I)[0]  # deterministic: least echelon basis
    reports = []
    I_j = I
    M_prev = 0
    for _ in range(cap + 2):
        rep = stabilization_M(A, sd, I_j, cap=cap)
        reports.append(rep)
        if rep.M is None:
            return None, None, {"inconclusive": True, "reports": reports}
        M_j = max(M_prev, rep.M)
        orbit = sigma_orbit(P, la.map_power(sd.sigma_matrix, p**M_j, A.p))
        I_next = orbit[0]
        for Q in orbit[1:]:
            I_next = ideal_intersection(I_next, Q)
        if I_next == I_j and M_j == M_prev:
            break
        I_j, M_prev = I_next, M_j
    J, M = I_j, M_prev
    sigma_M = la.map_power(sd.sigma_matrix, p**M, A.p)
    delta_M = la.map_power(sd.delta_matrix, p**M, A.p)
    flags = {
        "minimal sigma^(p^M)-prime": J in minimal_sigma_primes(A, sigma_M, zero),
        "I is the sigma-orbit intersection of J": _orbit_meet(J, sd.sigma_matrix) == I,
        "delta^(p^M)(J) <= J": all(
            J.contains(la.apply_map(delta_M, v, A.p)) for v in J.basis
        ),
        "inconclusive": False,
        "reports": reports,
    }
    return J, M, flags


def _orbit_meet(J: IdealSubspace, sigma) -> IdealSubspace:
    orbit = sigma_orbit(J, sigma)
    meet = orbit[0]
    for Q in orbit[1:]:
        meet = ideal_intersection(meet, Q)
    return meet


def _rational_scalar(A: FinAlgebra, q):
    """The c with q = c * 1, or None if q is not a scalar multiple of 1."""
    candidates = {Fraction(x) / Fraction(ux) for x, ux in zip(q, A.unit) if ux != 0}
    for c in candidates:
        if A.smul(c, A.one()) == tuple(q):
            return c
    return None


def char0_checks(A: FinAlgebra, sd: SkewDerivation, cap: int = 64) -> dict:
    """Characteristic-0 preservation checks for the radical and sigma-primes.

    Requires q = 1 or q not a root of unity; for rational q the root-of-
    unity condition is exactly q in {1, -1}.  Returns a report dict; a
    failure witnesses a bug in this implementation, not in the theory.
    """
    if A.char != 0:
        raise CoreError("requires characteristic 0")
    if sd.q is not None:
        c = _rational_scalar(A, sd.q)
        if c is None:
            raise CoreError("q is not a rational scalar")
        if c == -1:
            raise CoreError("q = -1 is a nontrivial root of unity")
        if c == 0:
            raise CoreError("q must be a unit")
    report = {"radical preserved": True, "sigma-primes preserved": True, "witnesses": []}
    N = radical(A)
    for v in N.basis:
        if not N.contains(sd.delta(v)):
            report["radical preserved"] = False
            report["witnesses"].append(("radical", v))
    zero = subspace(A, [])
    for I in minimal_sigma_primes(A, sd.sigma_matrix, zero, cap=cap):
        for v in I.basis:
            if not I.contains(sd.delta(v)):
                report["sigma-primes preserved"] = False
                report["witnesses"].append(("sigma-prime", v))
    return report
