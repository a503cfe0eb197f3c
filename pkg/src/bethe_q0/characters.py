"""sl(2) characters as Laurent polynomials in ``x = e^{Lambda_1}`` and the completeness identities.

A weight ``c * Lambda_1`` is stored as the exponent ``c``; the simple root is
an exponent shift of 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exactalg import LaurentPoly
from .fermionic import QuantumSpace, k_fermionic, patterns_of, r_closed
from .report import Report


def ch_irreducible(m: int) -> LaurentPoly:
    if m < 0:
        raise ValueError("m must be non-negative")
    return LaurentPoly({m - 2 * i: 1 for i in range(m + 1)})


def ch_quantum_space(nu: QuantumSpace) -> LaurentPoly:
    if not nu.is_nonnegative:
        raise ValueError(f"quantum space multiplicities must be non-negative: {nu!r}")
    out = LaurentPoly.one()
    for s, v in nu.items():
        out = out * ch_irreducible(s) ** v
    return out


def weight_multiplicity(nu: QuantumSpace, weight: int) -> int:
    return ch_quantum_space(nu).coeff(weight)


def irreducible_multiplicity(nu: QuantumSpace, weight: int) -> int:
    """Multiplicity of the highest-weight module ``V_weight`` in ``W(nu)``."""
    if weight < 0:
        raise ValueError("highest weight must be non-negative")
    ch = ch_quantum_space(nu)
    return ch.coeff(weight) - ch.coeff(weight + 2)


@lru_cache(maxsize=4096)
def _r_sum(nu: QuantumSpace, magnons: int) -> int:
    return sum(r_closed(nu, n) for n in patterns_of(magnons))


@lru_cache(maxsize=4096)
def _k_sum(nu: QuantumSpace, magnons: int) -> int:
    return sum(k_fermionic(nu, n) for n in patterns_of(magnons))


def r_character(nu: QuantumSpace, max_magnons: int) -> LaurentPoly:
    """``sum_N R(nu, N) x^(gamma_inf - 2M)`` over all patterns with ``M <= max_magnons``.

    Patterns with negative vacancy numbers are included.
    """
    top = nu.gamma_inf
    return LaurentPoly({top - 2 * m: _r_sum(nu, m) for m in range(max_magnons + 1)})


def k_character(nu: QuantumSpace, max_magnons: int) -> LaurentPoly:
    top = nu.gamma_inf
    return LaurentPoly({top - 2 * m: _k_sum(nu, m) for m in range(max_magnons + 1)})


def verify_completeness(nu: QuantumSpace, max_magnons: int) -> Report:
    """Weight and irreducible multiplicities from the R and K sums, plus Weyl symmetry."""
    report = Report(f"completeness nu={nu.to_spec()} M<={max_magnons}")
    ch = ch_quantum_space(nu)
    top = nu.gamma_inf
    rch = r_character(nu, max_magnons)
    for m in range(max_magnons + 1):
        lam = top - 2 * m
        report.add(f"R-sum M={m} weight={lam}", rch.coeff(lam), ch.coeff(lam))
        if lam >= 0:
            report.add(
                f"K-sum M={m} weight={lam}",
                _k_sum(nu, m),
                ch.coeff(lam) - ch.coeff(lam + 2),
            )
    lo = top - 2 * max_magnons
    for lam in range(top, 0, -2):
        if -lam >= lo:
            report.add(f"Weyl symmetry weight={lam}", rch.coeff(lam), rch.coeff(-lam))
    return report


@dataclass(frozen=True)
class LaurentSeries:
    """Series in ``x^-1`` known exactly at exponents ``>= floor``."""

    poly: LaurentPoly
    floor: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "poly", LaurentPoly({e: v for e, v in self.poly if e >= self.floor}))

    @property
    def top(self) -> int:
        return self.poly.degree if self.poly else self.floor

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentSeries(LaurentPoly({0: other}), self.floor)
        return LaurentSeries(self.poly + other.poly, max(self.floor, other.floor))

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(-self.poly, self.floor)

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentSeries) else -other)

    def __mul__(self, other: LaurentSeries) -> LaurentSeries:
        floor = max(self.floor + other.top, other.floor + self.top)
        return LaurentSeries(self.poly * other.poly, floor)

    def coeff(self, e: int) -> int:
        if e < self.floor:
            raise ValueError(f"exponent {e} below the known range (>= {self.floor})")
        return self.poly.coeff(e)


@dataclass(frozen=True)
class QSeries:
    """``Q_m`` through ``order`` magnons, i.e. exact down to ``x^(m - 2*order)``."""

    m: int
    order: int
    series: LaurentSeries

    def coeff(self, magnons: int) -> int:
        return self.series.coeff(self.m - 2 * magnons)


def q_series(m: int, order: int) -> QSeries:
    if m < 0 or order < 0:
        raise ValueError("need m >= 0 and order >= 0")
    nu = QuantumSpace.delta(m) if m else QuantumSpace()
    poly = r_character(nu, order)
    return QSeries(m, order, LaurentSeries(poly, m - 2 * order))


def verify_qsystem(kmax: int, order: int) -> Report:
    """``Q_k^2 - Q_{k+1} Q_{k-1} - 1`` vanishes down to ``x^-order``, and the stability congruence.

    Each ``Q_m`` is expanded just deep enough for the products to be exact
    through ``x^-order``.
    """
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    report = Report(f"Q-system k<={kmax} order={order}")
    depth: dict[int, int] = {}
    for k in range(1, kmax + 1):
        need = -(-(2 * k + order) // 2)
        for m in (k - 1, k, k + 1):
            depth[m] = max(depth.get(m, 0), need, m + 1)
    qs = {m: q_series(m, t) for m, t in depth.items()}
    for k in range(1, kmax + 1):
        q = {m: qs[m].series for m in (k - 1, k, k + 1)}
        resid = q[k] * q[k] - q[k + 1] * q[k - 1] - 1
        if resid.floor > -order:
            raise AssertionError("series not expanded deeply enough")
        report.add(f"recursion k={k}", resid.poly.window(-order, resid.top), LaurentPoly())
        # x^-k Q_k and x^-k-1 Q_{k+1} agree below x^(-2k-2)
        lhs = [qs[k].coeff(j) for j in range(k + 1)]
        rhs = [qs[k + 1].coeff(j) for j in range(k + 1)]
        report.add(f"stability k={k}", lhs, rhs)
    return report


def verify_q_characters(mmax: int, order: int) -> Report:
    report = Report(f"Q_m = ch W_m for m<={mmax} through {order} magnons")
    for m in range(mmax + 1):
        q = q_series(m, order)
        report.add(f"m={m}", q.series.poly, ch_irreducible(m).window(m - 2 * order, m))
    return report


def verify_sum_rule(nu: QuantumSpace, k: int, max_magnons: int) -> Report:
    """``R(nu + 2 delta_k) = R(nu + delta_{k+1} + delta_{k-1}) + R(nu)`` coefficientwise.

    All three are aligned at a common top exponent; the ``nu`` term starts
    ``k`` magnons lower.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    lam = nu + QuantumSpace({k: 2})
    mu = nu + QuantumSpace({k + 1: 1, **({k - 1: 1} if k > 1 else {})})
    report = Report(f"sum rule nu={nu.to_spec()} k={k} M<={max_magnons}")
    for m in range(max_magnons + 1):
        rhs = _r_sum(mu, m) + (_r_sum(nu, m - k) if m >= k else 0)
        report.add(f"M={m}", _r_sum(lam, m), rhs)
    return report
