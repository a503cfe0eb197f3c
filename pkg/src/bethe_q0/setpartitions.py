"""Set partitions of {1..N}, the refinement order and its Möbius function.

Order convention: ``p <= q`` when every block of ``q`` lies inside a block
of ``p`` (``q`` refines ``p``). The one-block partition is the minimum and
the all-singletons partition ``1/2/.../N`` is the maximum.

Partitions are indexed by their restricted-growth strings in
lexicographic order, which is a linear extension of ``<=``; the zeta
matrix is therefore upper unitriangular and the Möbius matrix is obtained
by exact back-substitution.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import prod
from typing import Iterator, Sequence

from .exactalg import LaurentPoly, TruncSeries

DEFAULT_CAP = 8
DEFAULT_MUSUM_BUDGET = 100_000


class PartitionCapError(ValueError):
    """Requested ground set or product poset is larger than the configured cap."""


@dataclass(frozen=True)
class SetPartition:
    """A partition of ``{1..n}``; blocks sorted internally and by minimum."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen = sorted(x for b in self.blocks for x in b)
        if seen != list(range(1, self.n + 1)):
            raise ValueError(f"blocks {self.blocks} do not partition 1..{self.n}")
        if any(not b for b in self.blocks):
            raise ValueError("empty block")
        canon = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0]))
        object.__setattr__(self, "blocks", canon)

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> SetPartition:
        blocks: dict[int, list[int]] = {}
        for i, label in enumerate(rgs, start=1):
            blocks.setdefault(label, []).append(i)
        return cls(len(rgs), tuple(tuple(b) for b in blocks.values()))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> SetPartition:
        """Parse ``"12/3"`` style notation (or ``"1,2/3"`` for labels above 9)."""
        blocks = []
        for chunk in text.strip().split("/"):
            chunk = chunk.strip()
            items = chunk.split(",") if "," in chunk else list(chunk)
            blocks.append(tuple(int(x) for x in items))
        total = sum(len(b) for b in blocks)
        return cls(total if n is None else n, tuple(blocks))

    @classmethod
    def finest(cls, n: int) -> SetPartition:
        return cls(n, tuple((i,) for i in range(1, n + 1)))

    @classmethod
    def coarsest(cls, n: int) -> SetPartition:
        return cls(n, (tuple(range(1, n + 1)),) if n else ())

    @property
    def rgs(self) -> tuple[int, ...]:
        out = [0] * self.n
        for label, b in enumerate(self.blocks):
            for x in b:
                out[x - 1] = label
        return tuple(out)

    @property
    def length(self) -> int:
        return len(self.blocks)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def __str__(self) -> str:
        sep = "" if self.n <= 9 else ","
        return "/".join(sep.join(map(str, b)) for b in self.blocks)


def _rgs_list(n: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def grow(prefix: list[int], top: int) -> None:
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for label in range(top + 2):
            prefix.append(label)
            grow(prefix, max(top, label))
            prefix.pop()

    if n == 0:
        return [()]
    grow([0], 0)
    return out


def _check_cap(n: int, cap: int) -> None:
    if n < 1:
        raise ValueError("ground set size must be positive")
    if n > cap:
        raise PartitionCapError(f"N={n} exceeds partition cap {cap}")


def enumerate_partitions(n: int, cap: int = DEFAULT_CAP) -> list[SetPartition]:
    """All partitions of ``{1..n}`` in lexicographic restricted-growth order."""
    _check_cap(n, cap)
    return list(_partitions(n))


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple[SetPartition, ...]:
    return tuple(SetPartition.from_rgs(r) for r in _rgs_list(n))


def refines(p: SetPartition, q: SetPartition) -> bool:
    """``p <= q``: every block of ``q`` is contained in some block of ``p``."""
    if p.n != q.n:
        raise ValueError(f"ground sets differ: {p.n} vs {q.n}")
    label = p.rgs
    return all(len({label[x - 1] for x in b}) == 1 for b in q.blocks)


def _refinements_rgs(rgs: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """RGS of every partition that refines the given one (itself included)."""
    n = len(rgs)
    blocks: dict[int, list[int]] = {}
    for i, label in enumerate(rgs):
        blocks.setdefault(label, []).append(i)
    block_list = list(blocks.values())
    for choice in product(*(_rgs_list(len(b)) for b in block_list)):
        labels = [0] * n
        for bi, (b, sub) in enumerate(zip(block_list, choice)):
            for pos, s in zip(b, sub):
                labels[pos] = (bi, s)
        # relabel to canonical restricted-growth form
        seen: dict = {}
        yield tuple(seen.setdefault(lab, len(seen)) for lab in labels)


class MobiusTable:
    """Möbius function of ``L_N`` as the exact inverse of its zeta matrix.

    Rows are stored sparsely: ``mu(p, q)`` is zero unless ``p <= q``.
    """

    def __init__(self, n: int):
        self.n = n
        self.partitions: tuple[SetPartition, ...] = _partitions(n)
        rgs = [p.rgs for p in self.partitions]
        self.index: dict[SetPartition, int] = {p: i for i, p in enumerate(self.partitions)}
        by_rgs = {r: i for i, r in enumerate(rgs)}
        # up[i]: indices j with partitions[i] <= partitions[j], ascending
        self.up: list[list[int]] = [sorted(by_rgs[r] for r in _refinements_rgs(r0)) for r0 in rgs]
        self.down: list[list[int]] = [[] for _ in rgs]
        for i, ups in enumerate(self.up):
            for j in ups:
                self.down[j].append(i)
        self._rows = [self._solve_row(i) for i in range(len(rgs))]

    def _solve_row(self, i: int) -> dict[int, int]:
        # sum_{i <= s <= j} mu(i, s) = delta(i, j), solved in increasing j
        acc: dict[int, int] = {}
        row: dict[int, int] = {}
        for s in self.up[i]:
            m = (1 if s == i else 0) - acc.get(s, 0)
            if m:
                row[s] = m
                for t in self.up[s]:
                    if t != s:
                        acc[t] = acc.get(t, 0) + m
        return row

    def __len__(self) -> int:
        return len(self.partitions)

    def _idx(self, p: SetPartition | int) -> int:
        return p if isinstance(p, int) else self.index[p]

    def mu(self, p: SetPartition | int, q: SetPartition | int) -> int:
        return self._rows[self._idx(p)].get(self._idx(q), 0)

    def zeta(self, p: SetPartition | int, q: SetPartition | int) -> int:
        i, j = self._idx(p), self._idx(q)
        return int(j in self.up[i])

    def row(self, p: SetPartition | int) -> dict[int, int]:
        return dict(self._rows[self._idx(p)])

    def matrix(self) -> list[list[int]]:
        size = len(self)
        return [[r.get(j, 0) for j in range(size)] for r in self._rows]

    def zeta_matrix(self) -> list[list[int]]:
        size = len(self)
        out = [[0] * size for _ in range(size)]
        for i, ups in enumerate(self.up):
            for j in ups:
                out[i][j] = 1
        return out

    def mu_to_max(self, p: SetPartition) -> int:
        return self.mu(p, len(self) - 1)

    def zeta_mu_is_identity(self) -> bool:
        """Check ``zeta @ mu == 1`` using the sparse structure."""
        for i, ups in enumerate(self.up):
            acc: dict[int, int] = {}
            for s in ups:
                for j, v in self._rows[s].items():
                    acc[j] = acc.get(j, 0) + v
            if {j: v for j, v in acc.items() if v} != {i: 1}:
                return False
        return True


_tables: dict[int, MobiusTable] = {}
_tables_lock = threading.Lock()


def mobius_table(n: int, cap: int = DEFAULT_CAP) -> MobiusTable:
    """Shared, build-once table for ``L_n``."""
    _check_cap(n, cap)
    table = _tables.get(n)
    if table is None:
        with _tables_lock:
            table = _tables.get(n)
            if table is None:
                table = MobiusTable(n)
                _tables[n] = table
    return table


@dataclass(frozen=True)
class ProductPosetElem:
    """An element of ``L_{N_1} x ... x L_{N_m}``, ordered componentwise."""

    parts: tuple[SetPartition, ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(p.n for p in self.parts)

    @property
    def length(self) -> int:
        return sum(p.length for p in self.parts)

    def __le__(self, other: ProductPosetElem) -> bool:
        if self.sizes != other.sizes:
            raise ValueError("different product posets")
        return all(refines(a, b) for a, b in zip(self.parts, other.parts))

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.parts) + ")"


def product_poset(sizes: Sequence[int], cap: int = DEFAULT_CAP) -> Iterator[ProductPosetElem]:
    for n in sizes:
        _check_cap(n, cap)
    for parts in product(*(_partitions(n) for n in sizes)):
        yield ProductPosetElem(tuple(parts))


def product_poset_size(sizes: Sequence[int]) -> int:
    return prod(len(_partitions(n)) for n in sizes)


def product_mobius_to_max(elem: ProductPosetElem, cap: int = DEFAULT_CAP) -> int:
    """``mu(elem, pi_max)`` as the product of the componentwise values."""
    return prod(mobius_table(p.n, cap).mu_to_max(p) for p in elem.parts)


def falling_factorial(n: int) -> LaurentPoly:
    """``(X)_n = X (X - 1) ... (X - n + 1)`` as a polynomial in ``X``."""
    out = LaurentPoly.one()
    for j in range(n):
        out = out * (LaurentPoly.monomial(1) - j)
    return out


def verify_falling_factorial(n: int, cap: int = DEFAULT_CAP) -> bool:
    """Both directions of the power / falling-factorial Möbius pair on ``L_n``."""
    table = mobius_table(n, cap)
    x = LaurentPoly.monomial(1)
    for j, pi in enumerate(table.partitions):
        below = table.down[j]
        lhs = x ** pi.length
        rhs = LaurentPoly()
        for i in below:
            rhs = rhs + falling_factorial(table.partitions[i].length)
        if lhs != rhs:
            return False
        lhs = falling_factorial(pi.length)
        rhs = LaurentPoly()
        for i in below:
            rhs = rhs + LaurentPoly.monomial(table.partitions[i].length, table.mu(i, j))
        if lhs != rhs:
            return False
    return True


def verify_musum(
    sizes: Sequence[int],
    cap: int = DEFAULT_CAP,
    budget: int = DEFAULT_MUSUM_BUDGET,
) -> bool:
    """``sum_pi mu(pi, pi_max) prod X_i^l(pi_i) == prod (X_i)_{N_i}`` as polynomials."""
    sizes = list(sizes)
    if not sizes:
        raise ValueError("need at least one factor")
    for n in sizes:
        _check_cap(n, cap)
    if product_poset_size(sizes) > budget:
        raise PartitionCapError(
            f"product poset of size {product_poset_size(sizes)} exceeds budget {budget}"
        )
    m, deg = len(sizes), sum(sizes)
    tables = [mobius_table(n, cap) for n in sizes]
    terms: dict[tuple[int, ...], int] = {}
    for elem in product_poset(sizes, cap):
        coeff = prod(t.mu_to_max(p) for t, p in zip(tables, elem.parts))
        key = tuple(p.length for p in elem.parts)
        terms[key] = terms.get(key, 0) + coeff
    lhs = TruncSeries(m, deg, terms)
    xs = TruncSeries.variables(m, deg)
    rhs = TruncSeries.one(m, deg)
    for xi, n in zip(xs, sizes):
        for j in range(n):
            rhs = rhs * (xi - j)
    return lhs == rhs
