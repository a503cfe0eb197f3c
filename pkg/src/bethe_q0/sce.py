"""String center equation ``A u = c mod Z^d``: construction, reduction, solution counting."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial, lcm, prod
from typing import Sequence

from .exactalg import IntMatrix, det, smith_normal_form
from .fermionic import QuantumSpace, StringPattern, f_matrix, vacancy
from .setpartitions import (
    ProductPosetElem,
    SetPartition,
    product_mobius_to_max,
    product_poset,
    product_poset_size,
)

DEFAULT_ENUM_BUDGET = 10**6
DEFAULT_POSET_BUDGET = 200


class BudgetExceeded(RuntimeError):
    pass


class SingularSystem(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class SCESystem:
    nu: QuantumSpace
    n: StringPattern
    labels: tuple[tuple[int, int], ...]
    A: IntMatrix
    c: tuple[Fraction, ...]

    @property
    def d(self) -> int:
        return len(self.labels)

    @property
    def vacancies(self) -> dict[int, int]:
        return {m: vacancy(self.nu, self.n, m) for m in self.n.support}


@dataclass(frozen=True, order=True)
class SCESolution:
    """Torus point; every coordinate a reduced fraction in ``[0, 1)``."""

    u: tuple[Fraction, ...]

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) for x in self.u) + ")"


@dataclass(frozen=True)
class ReducedSystem:
    pi: ProductPosetElem
    labels: tuple[tuple[int, int], ...]
    matrix: IntMatrix


def build_system(nu: QuantumSpace, n: StringPattern) -> SCESystem:
    labels = tuple((m, a) for m in n.support for a in range(1, n[m] + 1))
    pn = {m: vacancy(nu, n, m) + n[m] for m in n.support}
    rows = [
        [
            (pn[m] if (m, a) == (k, b) else 0) + 2 * min(m, k) - (m == k)
            for (k, b) in labels
        ]
        for (m, a) in labels
    ]
    A = IntMatrix.from_rows(rows) if labels else IntMatrix(0, 0, ())
    c = tuple(Fraction(pn[m] + 1, 2) for m, _ in labels)
    return SCESystem(nu, n, labels, A, c)


def finest_element(n: StringPattern) -> ProductPosetElem:
    return ProductPosetElem(tuple(SetPartition.finest(n[m]) for m in n.support))


def reduce_system(system: SCESystem, pi: ProductPosetElem) -> ReducedSystem:
    """Sum the columns of ``A`` over each block and keep one row per block."""
    support = system.n.support
    if pi.sizes != tuple(system.n[m] for m in support):
        raise ValueError(f"partition {pi} does not match pattern {system.n!r}")
    pos = {lab: i for i, lab in enumerate(system.labels)}
    groups = []
    for m, part in zip(support, pi.parts):
        for j, block in enumerate(part.blocks, start=1):
            groups.append(((m, j), [pos[(m, a)] for a in block]))
    rows = [
        [sum(system.A[rep[0], col] for col in cols) for _, cols in groups]
        for _, rep in groups
    ]
    labels = tuple(lab for lab, _ in groups)
    matrix = IntMatrix.from_rows(rows) if rows else IntMatrix(0, 0, ())
    return ReducedSystem(pi, labels, matrix)


def reduced_entry(system: SCESystem, pi: ProductPosetElem, row: tuple[int, int], col: tuple[int, int]) -> int:
    """Entry of the reduced matrix from block sizes alone."""
    (m, i), (k, j) = row, col
    support = system.n.support
    size = len(pi.parts[support.index(k)].blocks[j - 1])
    diag = vacancy(system.nu, system.n, m) + system.n[m] if (m, i) == (k, j) else 0
    return diag + (2 * min(m, k) - (m == k)) * size


def count_solutions(B: IntMatrix) -> int:
    """Number of solutions of ``B x = b mod Z^n``, for any ``b``."""
    value = det(B)
    if value == 0:
        raise SingularSystem("singular matrix: the solution set is not finite")
    return abs(value)


def det_api_factored(system: SCESystem, pi: ProductPosetElem) -> int:
    """``det F * prod_m (P_m + N_m)^(l(pi_m) - 1)``."""
    value = det(f_matrix(system.nu, system.n))
    for m, part in zip(system.n.support, pi.parts):
        value *= (vacancy(system.nu, system.n, m) + system.n[m]) ** (part.length - 1)
    return value


def solve_congruence(
    A: IntMatrix, c: Sequence[Fraction], budget: int = DEFAULT_ENUM_BUDGET
) -> list[tuple[Fraction, ...]]:
    """All ``u`` in ``(Q/Z)^d`` with ``A u = c mod Z^d``, sorted.

    With ``A = U S V`` in Smith form, ``S y = U^-1 c`` decouples into
    scalar congruences and ``u = V^-1 y``.
    """
    d = A.rows
    if d == 0:
        return [()]
    total = count_solutions(A)
    if total > budget:
        raise BudgetExceeded(f"{total} solutions exceed the enumeration budget {budget}")
    snf = smith_normal_form(A)
    s = snf.invariant_factors
    cden = lcm(*(Fraction(x).denominator for x in c))
    denom = cden * s[-1]
    c_scaled = [int(Fraction(x) * cden) for x in c]
    t = snf.U_inv.apply(c_scaled)
    v_inv = snf.V_inv

    # y_i = (t_i / cden + w_i) / s_i, held as numerators over ``denom``
    checked = set()
    for ws in product(*(range(si) for si in s)):
        u = _point(ws, t, s, cden, denom, v_inv)
        num = [(x * denom).numerator if (x * denom).denominator == 1 else None for x in u]
        if None in num or not _satisfies(A, num, c_scaled, cden, denom):
            raise ArithmeticError(f"candidate {u} fails the congruence")
        checked.add(u)
    if len(checked) != total:
        raise ArithmeticError(f"found {len(checked)} distinct solutions, expected {total}")
    return sorted(checked)


def _point(ws, t, s, cden, denom, v_inv: IntMatrix) -> tuple[Fraction, ...]:
    y = [(ti + cden * wi) * (denom // (cden * si)) for ti, wi, si in zip(t, ws, s)]
    return tuple(Fraction(x % denom, denom) for x in v_inv.apply(y))


def _satisfies(A: IntMatrix, num: list[int], c_scaled: list[int], cden: int, denom: int) -> bool:
    # A (num / denom) - c_scaled / cden must be integral
    scale = denom // cden
    return all((val - ci * scale) % denom == 0 for val, ci in zip(A.apply(num), c_scaled))


def enumerate_solutions(system: SCESystem, budget: int = DEFAULT_ENUM_BUDGET) -> list[SCESolution]:
    """Every solution of the system, in lexicographic order.

    The empty pattern has exactly one, empty, solution.
    """
    return [SCESolution(u) for u in solve_congruence(system.A, system.c, budget)]


def is_off_diagonal(system: SCESystem, sol: SCESolution) -> bool:
    seen: set[tuple[int, Fraction]] = set()
    for (m, _), x in zip(system.labels, sol.u):
        if (m, x) in seen:
            return False
        seen.add((m, x))
    return True


def filter_off_diagonal(system: SCESystem, sols: Sequence[SCESolution]) -> list[SCESolution]:
    return [s for s in sols if is_off_diagonal(system, s)]


def is_generic(system: SCESystem, sol: SCESolution) -> bool:
    nu = system.nu
    labels = system.labels
    for idx, ((m, _), x) in enumerate(zip(labels, sol.u)):
        if x == 0 and any(s < m and (m - s) % 2 and nu[s] > 0 for s in nu.support):
            return False
        for (k, _), y in zip(labels[idx + 1:], sol.u[idx + 1:]):
            if (k - m) % 2 == 0 and min(m, k) - (m == k) > 0 and x == y:
                return False
    return True


def filter_generic(system: SCESystem, sols: Sequence[SCESolution]) -> list[SCESolution]:
    return [s for s in sols if is_generic(system, s)]


def _check_vacancies(system: SCESystem) -> None:
    bad = {m: p for m, p in system.vacancies.items() if p < 0}
    if bad:
        raise PreconditionError(f"negative vacancy numbers {bad} for pattern {system.n!r}")


def _symmetry_order(n: StringPattern) -> int:
    return prod(factorial(v) for v in n.values())


def _exact_int(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise ArithmeticError(f"{what} = {value} is not an integer")
    return value.numerator


def count_off_diagonal_direct(
    system: SCESystem, budget: int = DEFAULT_ENUM_BUDGET, strict: bool = True
) -> int:
    """Off-diagonal solutions counted one by one, modulo relabelling within each length.

    ``strict`` demands non-negative vacancy numbers on the support; without it
    only a nonsingular ``A`` is needed.
    """
    if strict:
        _check_vacancies(system)
    sols = filter_off_diagonal(system, enumerate_solutions(system, budget))
    return _exact_int(Fraction(len(sols), _symmetry_order(system.n)), "direct count")


def count_off_diagonal_mobius(
    system: SCESystem, poset_budget: int = DEFAULT_POSET_BUDGET, strict: bool = True
) -> int:
    """Inclusion-exclusion over the partition lattices: ``sum_pi mu(pi, pi_max) |det A^pi|``."""
    if strict:
        _check_vacancies(system)
    sizes = [system.n[m] for m in system.n.support]
    size = product_poset_size(sizes)
    if size > poset_budget:
        raise BudgetExceeded(f"{size} partition tuples exceed the budget {poset_budget}")
    total = 0
    for pi in product_poset(sizes):
        total += product_mobius_to_max(pi) * abs(det(reduce_system(system, pi).matrix))
    return _exact_int(Fraction(total, _symmetry_order(system.n)), "Mobius count")


def string_gaps(nu: QuantumSpace, n: StringPattern, m: int) -> list[int]:
    """Orders ``zeta_{m,i}`` (``i = 2..m``) of the gaps between consecutive members of an m-string."""
    if m < 1:
        raise ValueError("m must be positive")

    def pn(j: int) -> int:
        return vacancy(nu, n, j) + n[j]

    return [
        sum(pn(m + 1 - 2 * k) for k in range(1, min(i - 1, m + 1 - i) + 1))
        for i in range(2, m + 1)
    ]


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    violations: tuple[tuple[int, int, int], ...]  # (m, i, zeta_{m,i}) with zeta < 1

    def __bool__(self) -> bool:
        return self.admissible


def is_pattern_admissible(nu: QuantumSpace, n: StringPattern) -> AdmissibilityReport:
    """Necessary condition for string solutions: every gap order at least 1."""
    bad = []
    for m in n.support:
        for i, z in enumerate(string_gaps(nu, n, m), start=2):
            if z < 1:
                bad.append((m, i, z))
    return AdmissibilityReport(not bad, tuple(bad))


__all__ = [
    "AdmissibilityReport",
    "BudgetExceeded",
    "DEFAULT_ENUM_BUDGET",
    "DEFAULT_POSET_BUDGET",
    "PreconditionError",
    "ReducedSystem",
    "SCESolution",
    "SCESystem",
    "SingularSystem",
    "build_system",
    "count_off_diagonal_direct",
    "count_off_diagonal_mobius",
    "count_solutions",
    "det_api_factored",
    "enumerate_solutions",
    "filter_generic",
    "filter_off_diagonal",
    "finest_element",
    "is_generic",
    "is_off_diagonal",
    "is_pattern_admissible",
    "reduce_system",
    "reduced_entry",
    "solve_congruence",
    "string_gaps",
]
