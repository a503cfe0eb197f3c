"""Quantum-space and string-pattern data, vacancy numbers, and the counts R and K."""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Iterable, Sequence

from .exactalg import IntMatrix, det


class FiniteSupport(Mapping):
    """Immutable finite-support map from positive integers to integers.

    Missing keys read as 0; zero values are never stored.
    """

    __slots__ = ("_items",)

    def __init__(self, data: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        if data is None:
            data = {}
        items = data.items() if isinstance(data, Mapping) else data
        acc: dict[int, int] = {}
        for k, v in items:
            if not isinstance(k, int) or isinstance(k, bool) or k < 1:
                raise ValueError(f"index must be a positive integer, got {k!r}")
            if not isinstance(v, int) or isinstance(v, bool):
                raise TypeError(f"value must be an integer, got {v!r}")
            acc[k] = acc.get(k, 0) + v
        self._items = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        self._validate()

    def _validate(self) -> None:
        pass

    @classmethod
    def delta(cls, s: int, times: int = 1):
        return cls({s: times})

    def __getitem__(self, k: int) -> int:
        for kk, v in self._items:
            if kk == k:
                return v
        return 0

    def __contains__(self, k: object) -> bool:
        return any(kk == k for kk, _ in self._items)

    def __iter__(self):
        return (k for k, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FiniteSupport):
            return type(self) is type(other) and self._items == other._items
        if isinstance(other, Mapping):
            return dict(self._items) == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._items))

    def __add__(self, other: FiniteSupport):
        return type(self)(list(self._items) + list(other.items()))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self._items)

    @property
    def max_index(self) -> int:
        return self._items[-1][0] if self._items else 0

    def to_spec(self) -> str:
        """``"idx:val,..."``, or ``"0"`` for the empty map."""
        return ",".join(f"{k}:{v}" for k, v in self._items) or "0"

    def __repr__(self) -> str:
        return f"{type(self).__name__}({dict(self._items)})"


class QuantumSpace(FiniteSupport):
    """``nu``: multiplicity ``nu_s`` of the ``(s+1)``-dimensional factor ``W_s``.

    Negative entries are accepted so that shifted data ``nu[J]`` can be
    represented; everything user-facing is non-negative.
    """

    __slots__ = ()

    @property
    def gamma_inf(self) -> int:
        return sum(s * v for s, v in self._items)

    @property
    def is_nonnegative(self) -> bool:
        return all(v >= 0 for _, v in self._items)


class StringPattern(FiniteSupport):
    """``N``: number ``N_m`` of ``m``-strings."""

    __slots__ = ()

    def _validate(self) -> None:
        if any(v < 0 for _, v in self._items):
            raise ValueError(f"string pattern entries must be non-negative: {dict(self._items)}")

    @property
    def magnons(self) -> int:
        """``M = sum m N_m``."""
        return sum(m * v for m, v in self._items)

    @property
    def num_strings(self) -> int:
        """``d = sum N_m``, the number of string centers."""
        return sum(v for _, v in self._items)


def gamma(nu: QuantumSpace, m: int, cutoff: int | None = None) -> int:
    """``gamma_m = sum_k min(m, k) nu_k`` (sum over ``k <= cutoff`` if given)."""
    return sum(min(m, k) * v for k, v in nu.items() if cutoff is None or k <= cutoff)


def vacancy(nu: QuantumSpace, n: StringPattern, m: int, cutoff: int | None = None) -> int:
    """``P_m = gamma_m - 2 sum_k min(m, k) N_k``; may be negative."""
    return gamma(nu, m, cutoff) - 2 * sum(
        min(m, k) * v for k, v in n.items() if cutoff is None or k <= cutoff
    )


def vacancies(nu: QuantumSpace, n: StringPattern, ms: Iterable[int] | None = None) -> dict[int, int]:
    ms = n.support if ms is None else ms
    return {m: vacancy(nu, n, m) for m in ms}


def binom_gen(xi, n: int):
    """Generalized binomial: ``xi(xi-1)...(xi-n+1)/n!``, 1 at ``n == 0``, else 0."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    num = 1
    for j in range(n):
        num *= xi - j
    if isinstance(num, int):
        q, r = divmod(num, factorial(n))
        assert r == 0
        return q
    out = Fraction(num) / factorial(n)
    return out.numerator if out.denominator == 1 else out


def f_matrix(
    nu: QuantumSpace,
    n: StringPattern,
    index_set: Sequence[int] | None = None,
    cutoff: int | None = None,
) -> IntMatrix:
    """``F_{m,k} = delta_{mk} P_m + 2 min(m, k) N_k`` over ``index_set`` (default supp N)."""
    idx = sorted(n.support if index_set is None else index_set)
    p = {m: vacancy(nu, n, m, cutoff) for m in idx}
    return IntMatrix.from_rows(
        [[(p[m] if m == k else 0) + 2 * min(m, k) * n[k] for k in idx] for m in idx]
    ) if idx else IntMatrix(0, 0, ())


@lru_cache(maxsize=None)
def _d_subset(J: tuple[int, ...]) -> int:
    if not J:
        return 1
    return det([[2 * min(m, k) - (m == k) for k in J] for m in J])


def d_subset(J: Iterable[int]) -> int:
    """``D_J = det(2 min(m, k) - delta_{mk})_{m,k in J}``; ``D_empty = 1``."""
    return _d_subset(tuple(sorted(set(J))))


def subset_shift(nu: QuantumSpace, n: StringPattern, J: Iterable[int]) -> tuple[QuantumSpace, StringPattern]:
    """``(nu[J], N[J])``: ``nu_s - 2[s in J]`` and ``N_m - [m in J]``."""
    J = set(J)
    return (
        QuantumSpace(list(nu.items()) + [(s, -2) for s in J]),
        StringPattern(list(n.items()) + [(m, -1) for m in J]),
    )


def _active(n: StringPattern, cutoff: int | None) -> list[int]:
    return [m for m in n.support if cutoff is None or m <= cutoff]


def r_closed(nu: QuantumSpace, n: StringPattern, cutoff: int | None = None) -> int:
    """Determinant form: ``det F * prod_m binom(P_m + N_m - 1, N_m - 1) / N_m``.

    Equal to 1 for the empty pattern. The rational product must come out
    integral; anything else is an internal error.
    """
    js = _active(n, cutoff)
    if not js:
        return 1
    value = Fraction(det(f_matrix(nu, n, js, cutoff)))
    for m in js:
        nm = n[m]
        value *= Fraction(binom_gen(vacancy(nu, n, m, cutoff) + nm - 1, nm - 1), nm)
    if value.denominator != 1:
        raise ArithmeticError(f"R({nu!r}, {n!r}) = {value} is not an integer")
    return value.numerator


def r_expanded(nu: QuantumSpace, n: StringPattern, cutoff: int | None = None) -> int:
    """Subset expansion of the determinant, summed over ``J`` within ``supp N``."""
    js = _active(n, cutoff)
    p = {m: vacancy(nu, n, m, cutoff) for m in js}
    full = {m: binom_gen(p[m] + n[m], n[m]) for m in js}
    reduced = {m: binom_gen(p[m] + n[m] - 1, n[m] - 1) for m in js}
    total = 0
    for size in range(len(js) + 1):
        for J in combinations(js, size):
            term = d_subset(J)
            for m in js:
                term *= reduced[m] if m in J else full[m]
            total += term
    return total


def r_shifted(nu: QuantumSpace, n: StringPattern, cutoff: int | None = None) -> int:
    """Same sum written through the shifted data: ``sum_J D_J K(nu[J], N[J])``.

    Vacancy numbers are recomputed from ``(nu[J], N[J])``.
    """
    js = _active(n, cutoff)
    total = 0
    for size in range(len(js) + 1):
        for J in combinations(js, size):
            nu_j, n_j = subset_shift(nu, n, J)
            term = d_subset(J)
            for m in js:
                term *= binom_gen(vacancy(nu_j, n_j, m, cutoff) + n_j[m], n_j[m])
            total += term
    return total


def k_fermionic(nu: QuantumSpace, n: StringPattern, cutoff: int | None = None) -> int:
    """``K = prod_m binom(P_m + N_m, N_m)``."""
    out = 1
    for m in _active(n, cutoff):
        out *= binom_gen(vacancy(nu, n, m, cutoff) + n[m], n[m])
    return out


@lru_cache(maxsize=None)
def _int_partitions(total: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if total == 0:
        return ((),)
    out = []
    for first in range(min(total, largest), 0, -1):
        for rest in _int_partitions(total - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def patterns_of(magnons: int) -> tuple[StringPattern, ...]:
    """All string patterns with ``sum m N_m == magnons``, largest part first."""
    if magnons < 0:
        return ()
    out = []
    for parts in _int_partitions(magnons, magnons):
        counts: dict[int, int] = {}
        for p in parts:
            counts[p] = counts.get(p, 0) + 1
        out.append(StringPattern(counts))
    return tuple(out)
