"""Generating functions of the cut-off counts ``R_l`` and ``K_l`` as truncated power series.

Three coordinate systems on the same formal neighbourhood of 0 appear:
``w`` (the counting variables), ``z`` and ``v``, tied together by

    v_j = z_j prod_{k<j} (1 - v_k)^(-2(j-k)),    w_j = z_j prod_k (1 - v_k)^(-2j),

equivalently ``v_i = w_i prod_k (1 - v_k)^(2 min(i, k))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterator, Sequence

from .exactalg import TruncSeries, series_jacobian, series_solve_v
from .fermionic import (
    QuantumSpace,
    StringPattern,
    binom_gen,
    d_subset,
    gamma,
    k_fermionic,
    r_closed,
    vacancy,
)
from .report import Report


def exponent_vectors(nvars: int, order: int) -> Iterator[tuple[int, ...]]:
    """All exponent vectors of total degree ``<= order``, by degree then lexicographically."""
    def rec(n: int, budget: int) -> Iterator[tuple[int, ...]]:
        if n == 0:
            yield ()
            return
        for e in range(budget + 1):
            for rest in rec(n - 1, budget - e):
                yield (e,) + rest

    for deg in range(order + 1):
        for exps in rec(nvars, deg):
            if sum(exps) == deg:
                yield exps


def _pattern(exps: Sequence[int]) -> StringPattern:
    return StringPattern({m: e for m, e in enumerate(exps, start=1)})


@dataclass(frozen=True)
class GenFunContext:
    """Cut-off ``l`` and truncation ``order`` shared by every series of one check."""

    l: int
    order: int

    def __post_init__(self) -> None:
        if self.l < 1 or self.order < 1:
            raise ValueError("need l >= 1 and order >= 1")

    @cached_property
    def v(self) -> list[TruncSeries]:
        """``v(w)``, one degree beyond ``order`` so Jacobians stay exact."""
        return series_solve_v(self.l, self.order + 1)

    def v_at_order(self) -> list[TruncSeries]:
        return [vj.truncate(self.order) for vj in self.v]

    def gammas(self, nu: QuantumSpace) -> list[int]:
        return [gamma(nu, j, self.l) for j in range(1, self.l + 1)]

    @cached_property
    def dz_dw(self) -> TruncSeries:
        """Jacobian ``det(d z_i / d w_j)`` through ``order``."""
        v = self.v
        z = []
        for j in range(1, self.l + 1):
            zj = TruncSeries.variable(self.l, self.order + 1, j - 1)
            for vk in v:
                zj = zj * (1 - vk) ** (2 * j)
            z.append(zj)
        return series_jacobian(z)

    def one_minus_v_power(self, exponents: Sequence[int]) -> TruncSeries:
        out = TruncSeries.one(self.l, self.order)
        for vj, e in zip(self.v_at_order(), exponents):
            out = out * (1 - vj) ** e
        return out

    def d_sum(self, v: Sequence[TruncSeries] | None = None) -> TruncSeries:
        """``sum_J D_J prod_{i in J} v_i`` over ``J`` within ``1..l``."""
        v = self.v_at_order() if v is None else v
        total = TruncSeries.zero(self.l, v[0].order)
        for size in range(self.l + 1):
            for J in combinations(range(1, self.l + 1), size):
                term = TruncSeries.constant(self.l, v[0].order, d_subset(J))
                for i in J:
                    term = term * v[i - 1]
                total = total + term
        return total


def r_l_series(nu: QuantumSpace, l: int, order: int) -> TruncSeries:
    """``sum_N R_l(nu, N) w^N`` over ``N_1 + ... + N_l <= order``."""
    return TruncSeries(
        l, order, {e: r_closed(nu, _pattern(e), cutoff=l) for e in exponent_vectors(l, order)}
    )


def k_l_series(nu: QuantumSpace, l: int, order: int) -> TruncSeries:
    return TruncSeries(
        l, order, {e: k_fermionic(nu, _pattern(e), cutoff=l) for e in exponent_vectors(l, order)}
    )


def verify_r0(l: int, order: int) -> Report:
    ctx = GenFunContext(l, order)
    report = Report(f"R_l(0|w) = 1, l={l} order={order}")
    one = TruncSeries.one(l, order)
    report.add("R_l(0|w) = 1", r_l_series(QuantumSpace(), l, order), one)
    report.add("K_l(0|w) * sum_J D_J prod v = 1", k_l_series(QuantumSpace(), l, order) * ctx.d_sum(), one)
    return report


def verify_kexp(l: int, order: int) -> Report:
    ctx = GenFunContext(l, order)
    report = Report(f"K_l(0|w) Jacobian form, l={l} order={order}")
    rhs = ctx.dz_dw * ctx.one_minus_v_power([-(l * (l + 1)) - 1] * l)
    report.add("K_l(0|w) = dz/dw prod (1-v)^(-l(l+1)-1)", k_l_series(QuantumSpace(), l, order), rhs)
    return report


def verify_rkk(nu: QuantumSpace, l: int, order: int) -> Report:
    ctx = GenFunContext(l, order)
    report = Report(f"R_l = K_l/K_l(0) = prod (1-v)^-gamma, nu={nu.to_spec()} l={l} order={order}")
    r = r_l_series(nu, l, order)
    ratio = k_l_series(nu, l, order) / k_l_series(QuantumSpace(), l, order)
    closed = ctx.one_minus_v_power([-g for g in ctx.gammas(nu)])
    report.add("R_l(nu|w) = K_l(nu|w)/K_l(0|w)", r, ratio)
    report.add("R_l(nu|w) = prod (1-v_j)^-gamma_j", r, closed)
    return report


def verify_factorization(nu: QuantumSpace, nu2: QuantumSpace, l: int, order: int) -> Report:
    report = Report(
        f"R_l(nu) R_l(nu') = R_l(nu+nu'), nu={nu.to_spec()} nu'={nu2.to_spec()} l={l} order={order}"
    )
    report.add(
        "factorization",
        r_l_series(nu, l, order) * r_l_series(nu2, l, order),
        r_l_series(nu + nu2, l, order),
    )
    return report


def fop_sides(l: int, order: int) -> tuple[TruncSeries, TruncSeries]:
    """Both sides of ``(dw/dz) prod (1-v)^(l(l+1)+1) = sum_J D_J prod v_i``, in ``z``."""
    deep = order + 1
    z = TruncSeries.variables(l, deep)
    v: list[TruncSeries] = []
    for j in range(1, l + 1):
        vj = z[j - 1]
        for k in range(1, j):
            vj = vj * (1 - v[k - 1]) ** (-2 * (j - k))
        v.append(vj)
    w = []
    for j in range(1, l + 1):
        wj = z[j - 1]
        for vk in v:
            wj = wj * (1 - vk) ** (-2 * j)
        w.append(wj)
    jac = series_jacobian(w)
    v_t = [vj.truncate(order) for vj in v]
    lhs = jac
    for vj in v_t:
        lhs = lhs * (1 - vj) ** (l * (l + 1) + 1)
    rhs = GenFunContext(l, order).d_sum(v_t)
    return lhs, rhs


def verify_fop(l: int, order: int) -> Report:
    lhs, rhs = fop_sides(l, order)
    report = Report(f"Jacobian determinant identity, l={l} order={order}")
    report.add("(dw/dz) prod (1-v)^(l(l+1)+1) = sum_J D_J prod v_i", lhs, rhs)
    return report


def hkoty_sides(betas: Sequence[int], order: int) -> tuple[TruncSeries, TruncSeries]:
    """``prod_j (1 - z_{j,j-1})^(-beta_j-1)`` through the substitution chain, and its binomial expansion."""
    l = len(betas)
    chain: dict[tuple[int, int], TruncSeries] = {}
    for j, zj in enumerate(TruncSeries.variables(l, order), start=1):
        chain[j, 0] = zj
    for i in range(1, l):
        for j in range(i + 1, l + 1):
            chain[j, i] = chain[j, i - 1] * (1 - chain[i, i - 1]) ** (-2 * (j - i))
    psi = TruncSeries.one(l, order)
    for j in range(1, l + 1):
        psi = psi * (1 - chain[j, j - 1]) ** (-betas[j - 1] - 1)
    coeffs = {}
    for exps in exponent_vectors(l, order):
        term = 1
        for j in range(1, l + 1):
            shift = 2 * sum((k - j) * exps[k - 1] for k in range(j + 1, l + 1))
            term *= binom_gen(betas[j - 1] + shift + exps[j - 1], exps[j - 1])
        coeffs[exps] = term
    return psi, TruncSeries(l, order, coeffs)


def verify_hkoty(betas: Sequence[int], order: int) -> Report:
    lhs, rhs = hkoty_sides(betas, order)
    report = Report(f"chained binomial expansion, beta={list(betas)} order={order}")
    report.add("psi_1 expansion", lhs, rhs)
    return report


def verify_residues(nu: QuantumSpace, l: int, order: int) -> Report:
    """Coefficient form of the residue formulas for ``K_l`` and its shifted summands.

    The coefficient of ``w^N`` in
    ``prod (1-v_j)^(-gamma_j-l(l+1)-1) (prod_{i in J} v_i) dz/dw``
    is ``prod_m binom(P_m + N[J]_m, N[J]_m)``, with ``J`` empty giving ``K_l``.
    """
    ctx = GenFunContext(l, order)
    report = Report(f"residue coefficients, nu={nu.to_spec()} l={l} order={order}")
    base = ctx.dz_dw * ctx.one_minus_v_power([-g - l * (l + 1) - 1 for g in ctx.gammas(nu)])
    v = ctx.v_at_order()
    for size in range(l + 1):
        for J in combinations(range(1, l + 1), size):
            series = base
            for i in J:
                series = series * v[i - 1]
            for exps in exponent_vectors(l, order):
                n = _pattern(exps)
                expected = 1
                for m in range(1, l + 1):
                    shifted = n[m] - (m in J)
                    expected *= binom_gen(vacancy(nu, n, m, l) + shifted, shifted)
                report.add(f"J={set(J) or '{}'} N={exps}", series.coeff(exps), expected)
    return report


__all__ = [
    "GenFunContext",
    "exponent_vectors",
    "fop_sides",
    "hkoty_sides",
    "k_l_series",
    "r_l_series",
    "verify_factorization",
    "verify_fop",
    "verify_hkoty",
    "verify_kexp",
    "verify_r0",
    "verify_residues",
    "verify_rkk",
]
